"""Riemannian geometry expressed through a codifferential.

The central object is a ``Codifferential``: a degree -1 operator on forms that
is regular, meaning its failure to commute with multiplication by a function
``a`` is the interior product along ``da``.  From it we rebuild the metric
pairing and the Levi-Civita connection

    nabla_w h = 1/2 ( L_delta(w, h) + Lie_w h + (dw) perp h ),

and from there torsion, metric compatibility, curvature, Laplacians and Ricci.
``Christoffel`` is an independent coordinate implementation used as oracle.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DegreeError, InvalidMetric, LeibnizatorMismatch, NotRegular, SqrtUnavailable
from .forms import Chart, Form, TensorForm, leibnizator, merge_indices, remove_position
from .report import Check, Report, Tally

__all__ = [
    "Metric",
    "Christoffel",
    "Codifferential",
    "ConformalData",
    "ThetaData",
    "metric_pairing",
    "interior",
    "interior_multi",
    "perp",
    "lie_derivative",
    "divergence_delta",
    "hodge_delta",
    "hodge_star",
    "L_delta",
    "levi_connection",
    "levi_higher",
    "torsion",
    "metric_compat",
    "curvature",
    "hodge_laplacian",
    "laplace_beltrami",
    "weitzenbock",
    "extend_to_tensor",
    "ricci_via_delta",
    "ricci_map",
    "ricci_from_curvature",
    "theta_map",
    "conformal_check",
]


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------


def _det(matrix: Sequence[Sequence], one):
    n = len(matrix)
    total = None
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = one
        for i in range(n):
            term = term * matrix[i][perm[i]]
        if inversions % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else one


def _invert(matrix: Sequence[Sequence], ring):
    n = len(matrix)
    rows = [list(r) + [ring.one() if i == j else ring.zero() for j in range(n)] for i, r in enumerate(matrix)]
    for col in range(n):
        candidates = [r for r in range(col, n) if not rows[r][col].is_zero()]
        if not candidates:
            raise InvalidMetric("metric matrix is singular")
        if ring.exact:
            pivot = candidates[0]
        else:
            pivot = max(candidates, key=lambda r: abs(rows[r][col].value()))
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and not rows[r][col].is_zero():
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [row[n:] for row in rows]


class Metric:
    """Metric ``g_ij`` and its inverse ``g^ij`` (the pairing of 1-forms).

    ``g`` may be ``None`` for a degenerate pairing built with
    ``from_pairing``; only pairing-level operations are then available.
    """

    def __init__(self, chart: Chart, g, g_inv, label: str = ""):
        self.chart = chart
        self.dim = chart.dim
        self.g = g
        self.g_inv = g_inv
        self.label = label

    @classmethod
    def from_matrix(cls, chart: Chart, matrix: Sequence[Sequence], label: str = "") -> "Metric":
        ring = chart.ring
        n = chart.dim
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise InvalidMetric(f"metric must be a {n}x{n} matrix")
        g = [[ring.const(v) if isinstance(v, (int, Fraction)) else v for v in row] for row in matrix]
        for i in range(n):
            for j in range(i + 1, n):
                if not (g[i][j] - g[j][i]).is_zero():
                    raise InvalidMetric("metric matrix is not symmetric")
        g_inv = _invert(g, ring)
        return cls(chart, g, g_inv, label)

    @classmethod
    def from_pairing(cls, chart: Chart, pairing: Sequence[Sequence], label: str = "") -> "Metric":
        ring = chart.ring
        g_inv = [[ring.const(v) if isinstance(v, (int, Fraction)) else v for v in row] for row in pairing]
        try:
            g = _invert(g_inv, ring)
        except InvalidMetric:
            g = None
        return cls(chart, g, g_inv, label)

    @property
    def invertible(self) -> bool:
        return self.g is not None

    def require_invertible(self) -> None:
        if self.g is None:
            raise InvalidMetric("operation needs a nondegenerate metric")

    def det(self):
        self.require_invertible()
        return _det(self.g, self.chart.ring.one())

    def raise_index(self, form: Form) -> list:
        """Vector field components ``v^j = sum_a w_a g^{aj}`` of a 1-form."""
        form.require_degree(1, "vector argument")
        ring = self.chart.ring
        out = []
        for j in range(self.dim):
            total = ring.zero()
            for (a,), c in form.comps.items():
                gij = self.g_inv[a][j]
                if not gij.is_zero():
                    total = total + c * gij
            out.append(total)
        return out

    def metric_pairs(self) -> list[tuple[Form, Form]]:
        """A decomposition ``g = sum g1 (x) g2`` with ``g1 = g_ab dx^a``, ``g2 = dx^b``."""
        self.require_invertible()
        chart = self.chart
        pairs = []
        for b in range(self.dim):
            left = Form(chart, {(a,): self.g[a][b] for a in range(self.dim)})
            pairs.append((left, chart.dx(b)))
        return pairs

    def metric_tensor(self) -> TensorForm:
        return TensorForm.from_pairs(self.chart, self.metric_pairs())

    def __repr__(self) -> str:
        return f"Metric({self.label or self.chart!r})"


def metric_pairing(omega: Form, eta: Form, metric: Metric):
    """``(w, h) = w_i g^{ij} h_j`` for 1-forms."""
    omega.require_degree(1, "first pairing argument")
    eta.require_degree(1, "second pairing argument")
    ring = metric.chart.ring
    total = ring.zero()
    for (i,), a in omega.comps.items():
        for (j,), b in eta.comps.items():
            gij = metric.g_inv[i][j]
            if not gij.is_zero():
                total = total + a * gij * b
    return total


# ---------------------------------------------------------------------------
# Interior products, perp, Lie derivative
# ---------------------------------------------------------------------------


def interior(omega: Form, eta: Form, metric: Metric) -> Form:
    """Interior product along the vector field dual to the 1-form ``omega``."""
    return eta.contract_vector(metric.raise_index(omega))


def interior_multi(omega: Form, eta: Form, metric: Metric) -> Form:
    """``i_{w1...wm} = i_{w1} o ... o i_{wm}``; a 0-form acts by multiplication."""
    m = omega.degree
    chart = metric.chart
    total = chart.zero()
    for idx, c in omega.comps.items():
        result = eta
        for i in reversed(idx):
            result = interior(chart.dx(i), result, metric)
        total = total + result.scale(c)
    return total


def perp(omega: Form, eta: Form, metric: Metric) -> Form:
    """Degree -2 operation extending the pairing as a biderivation.

    On basis forms ``dx^I perp dx^J = sum_{p,q} (-1)^(p+q) g^{I_p J_q}
    dx^{I minus I_p} ^ dx^{J minus J_q}``.
    """
    chart = metric.chart
    comps: dict = {}
    for I, a in omega.comps.items():
        if not I:
            continue
        for J, b in eta.comps.items():
            if not J:
                continue
            ab = a * b
            for p, i in enumerate(I):
                sp, rest_i = remove_position(I, p)
                for q, j in enumerate(J):
                    gij = metric.g_inv[i][j]
                    if gij.is_zero():
                        continue
                    sq, rest_j = remove_position(J, q)
                    merged = merge_indices(rest_i, rest_j)
                    if merged is None:
                        continue
                    sign, K = merged
                    term = ab * gij
                    if sign * sp * sq < 0:
                        term = -term
                    comps[K] = comps[K] + term if K in comps else term
    return Form(chart, comps)


def lie_derivative(omega: Form, eta: Form, metric: Metric) -> Form:
    """``Lie_w h = w perp dh - (-1)^|w| d(w perp h)``; Cartan formula on 1-forms."""
    total = metric.chart.zero()
    deta = eta.d()
    for deg, piece in omega.parts().items():
        first = perp(piece, deta, metric)
        second = perp(piece, eta, metric).d()
        total = total + (first + second if deg % 2 else first - second)
    return total


# ---------------------------------------------------------------------------
# Christoffel oracle
# ---------------------------------------------------------------------------


class Christoffel:
    """Coordinate Levi-Civita data computed from the classical formulas."""

    def __init__(self, metric: Metric):
        metric.require_invertible()
        self.metric = metric
        chart = metric.chart
        n = chart.dim
        ring = chart.ring
        g, gi = metric.g, metric.g_inv
        dg = [[[g[i][j].partial(k) for k in range(n)] for j in range(n)] for i in range(n)]
        half = Fraction(1, 2)
        gamma = [[[ring.zero() for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for k in range(n):
            for i in range(n):
                for j in range(i, n):
                    total = ring.zero()
                    for l in range(n):
                        if gi[k][l].is_zero():
                            continue
                        total = total + gi[k][l] * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l])
                    total = total * half
                    gamma[k][i][j] = total
                    gamma[k][j][i] = total
        self.gamma = gamma
        self._riemann = None

    def covariant_coordinate(self, c: int, form: Form) -> Form:
        """Covariant derivative of a form along ``d/dx^c``."""
        chart = self.metric.chart
        n = chart.dim
        comps: dict = {}

        def put(k, v):
            comps[k] = comps[k] + v if k in comps else v

        for idx, a in form.comps.items():
            put(idx, a.partial(c))
            for pos, i in enumerate(idx):
                s1, rest = remove_position(idx, pos)
                for l in range(n):
                    gam = self.gamma[i][c][l]
                    if gam.is_zero():
                        continue
                    merged = merge_indices((l,), rest)
                    if merged is None:
                        continue
                    s2, K = merged
                    term = a * gam
                    # nabla dx^i = -Gamma^i_{cl} dx^l
                    put(K, term if s1 * s2 < 0 else -term)
        return Form(chart, comps)

    def connection(self, omega: Form, eta: Form) -> Form:
        """``nabla_w h`` along the vector field dual to the 1-form ``w``."""
        vec = self.metric.raise_index(omega)
        total = self.metric.chart.zero()
        for c, v in enumerate(vec):
            if v.is_zero():
                continue
            total = total + self.covariant_coordinate(c, eta).scale(v)
        return total

    @property
    def riemann(self):
        """``R^r_{s m v} = d_m G^r_{vs} - d_v G^r_{ms} + G^r_{ml} G^l_{vs} - G^r_{vl} G^l_{ms}``."""
        if self._riemann is None:
            n = self.metric.dim
            ring = self.metric.chart.ring
            G = self.gamma
            R = [[[[ring.zero() for _ in range(n)] for _ in range(n)] for _ in range(n)] for _ in range(n)]
            for r in range(n):
                for s in range(n):
                    for m in range(n):
                        for v in range(n):
                            if v <= m:
                                continue
                            total = G[r][v][s].partial(m) - G[r][m][s].partial(v)
                            for l in range(n):
                                total = total + G[r][m][l] * G[l][v][s] - G[r][v][l] * G[l][m][s]
                            R[r][s][m][v] = total
                            R[r][s][v][m] = -total
            self._riemann = R
        return self._riemann

    def ricci_components(self):
        n = self.metric.dim
        ring = self.metric.chart.ring
        R = self.riemann
        out = []
        for s in range(n):
            row = []
            for v in range(n):
                total = ring.zero()
                for r in range(n):
                    total = total + R[r][s][r][v]
                row.append(total)
            out.append(row)
        return out

    def ricci_tensor(self) -> TensorForm:
        chart = self.metric.chart
        ric = self.ricci_components()
        n = chart.dim
        return TensorForm(chart, {((a,), (b,)): ric[a][b] for a in range(n) for b in range(n)})

    def curvature(self, omega: Form, eta: Form, zeta: Form) -> Form:
        """``R(X_w, X_h)`` acting on the 1-form ``zeta``."""
        chart = self.metric.chart
        n = chart.dim
        X = self.metric.raise_index(omega)
        Y = self.metric.raise_index(eta)
        R = self.riemann
        comps: dict = {}
        for (r,), z in zeta.comps.items():
            for s in range(n):
                total = chart.ring.zero()
                for m in range(n):
                    for v in range(n):
                        total = total + X[m] * Y[v] * R[r][s][m][v]
                term = -(z * total)
                comps[(s,)] = comps[(s,)] + term if (s,) in comps else term
        return Form(chart, comps)

    def ricci_map(self, omega: Form) -> Form:
        """``Ric(X_w, .)`` as a 1-form."""
        chart = self.metric.chart
        n = chart.dim
        vec = self.metric.raise_index(omega)
        ric = self.ricci_components()
        comps = {}
        for s in range(n):
            total = chart.ring.zero()
            for m in range(n):
                total = total + ric[s][m] * vec[m]
            comps[(s,)] = total
        return Form(chart, comps)


# ---------------------------------------------------------------------------
# Codifferentials
# ---------------------------------------------------------------------------


def _sub_det(matrix, rows: Sequence[int], cols: Sequence[int], one):
    return _det([[matrix[r][c] for c in cols] for r in rows], one)


def hodge_star(metric: Metric, form: Form, orientation: int = 1, sqrt_det=None) -> Form:
    """Hodge star with ``w ^ *h = (w, h) Vol`` and ``Vol = orientation sqrt|g| dx^1...dx^n``."""
    chart = metric.chart
    n = chart.dim
    one = chart.ring.one()
    if sqrt_det is None:
        sqrt_det = _sqrt_det(metric)
    full = tuple(range(n))
    comps: dict = {}
    for I, c in form.comps.items():
        k = len(I)
        for Ip in itertools.combinations(full, k):
            G = _sub_det(metric.g_inv, I, Ip, one)
            if G.is_zero():
                continue
            J = tuple(i for i in full if i not in Ip)
            sign, _ = merge_indices(Ip, J)
            term = c * G * sqrt_det
            if sign * orientation < 0:
                term = -term
            comps[J] = comps[J] + term if J in comps else term
    return Form(chart, comps)


def _sqrt_det(metric: Metric):
    det = metric.det()
    try:
        return det.sqrt()
    except SqrtUnavailable:
        raise
    except Exception as exc:  # NotPositive etc.
        raise SqrtUnavailable(str(exc)) from exc


class Codifferential:
    """A degree -1 operator on forms together with the metric it is built on.

    ``mode`` is ``"divergence"`` (``i_{g1} nabla_{g2}`` via Christoffel),
    ``"hodge"`` (``(-1)^(|w|+1) *^-1 d *``) or ``"custom"`` (user function).
    An optional vector field ``vector`` adds the interior coderivation
    ``w -> sum v^i contract(i, w)``.
    """

    def __init__(
        self,
        metric: Metric,
        mode: str = "divergence",
        vector: Sequence | None = None,
        orientation: int = 1,
        function: Callable[[Form], Form] | None = None,
    ):
        if mode not in ("divergence", "hodge", "custom"):
            raise ValueError(f"unknown codifferential mode {mode!r}")
        self.metric = metric
        self.chart = metric.chart
        self.mode = mode
        self.vector = list(vector) if vector is not None else None
        self.orientation = orientation
        self.function = function
        self._christoffel: Christoffel | None = None
        self._sqrt_det = None
        if mode == "hodge":
            self._sqrt_det = _sqrt_det(metric)
        if mode == "custom" and function is None:
            raise ValueError("custom codifferential needs a function")

    @property
    def christoffel(self) -> Christoffel:
        if self._christoffel is None:
            self._christoffel = Christoffel(self.metric)
        return self._christoffel

    def with_interior(self, vector: Sequence) -> "Codifferential":
        ring = self.chart.ring
        vec = [ring.const(v) if isinstance(v, (int, Fraction)) else v for v in vector]
        if self.vector is not None:
            vec = [a + b for a, b in zip(self.vector, vec)]
        out = Codifferential(self.metric, self.mode, vec, self.orientation, self.function)
        out._christoffel = self._christoffel
        out._sqrt_det = self._sqrt_det
        return out

    def base(self, form: Form) -> Form:
        if self.mode == "divergence":
            return _divergence(self.christoffel, form)
        if self.mode == "hodge":
            return _hodge_delta(self.metric, form, self.orientation, self._sqrt_det)
        return self.function(form)

    def __call__(self, form: Form) -> Form:
        out = self.base(form)
        if self.vector is not None:
            out = out + form.contract_vector(self.vector)
        return out

    def __repr__(self) -> str:
        extra = " + interior" if self.vector is not None else ""
        return f"Codifferential({self.mode}{extra}, {self.metric!r})"


def _divergence(chris: Christoffel, form: Form) -> Form:
    metric = chris.metric
    total = metric.chart.zero()
    for c in range(metric.dim):
        cov = chris.covariant_coordinate(c, form)
        total = total + cov.contract_vector(metric.g_inv[c])
    return total


def divergence_delta(metric: Metric, form: Form | None = None):
    """The divergence codifferential; returns the handle when ``form`` is omitted."""
    handle = Codifferential(metric, "divergence")
    return handle if form is None else handle(form)


def _hodge_delta(metric: Metric, form: Form, orientation: int, sqrt_det) -> Form:
    n = metric.dim
    total = metric.chart.zero()
    for k, piece in form.parts().items():
        if k == 0:
            continue
        star = hodge_star(metric, piece, orientation, sqrt_det)
        dstar = star.d()
        p = n - k + 1
        back = hodge_star(metric, dstar, orientation, sqrt_det)
        sign = (-1) ** (p * (n - p)) * (-1) ** (k + 1)
        total = total + (back if sign > 0 else -back)
    return total


def hodge_delta(metric: Metric, orientation: int = 1, form: Form | None = None):
    """Hodge codifferential; raises ``SqrtUnavailable`` without an exact root of det g."""
    handle = Codifferential(metric, "hodge", orientation=orientation)
    return handle if form is None else handle(form)


# ---------------------------------------------------------------------------
# Operations built from a codifferential
# ---------------------------------------------------------------------------


def L_delta(delta: Codifferential, omega: Form, eta: Form) -> Form:
    """Leibnizator of the codifferential."""
    return leibnizator(delta, -1, omega, eta)


def levi_connection(delta: Codifferential, omega: Form, eta: Form) -> Form:
    """``nabla_w h = 1/2 (L_delta(w,h) + Lie_w h + (dw) perp h)`` for a 1-form ``w``."""
    omega.require_degree(1, "direction of the covariant derivative")
    metric = delta.metric
    total = L_delta(delta, omega, eta) + lie_derivative(omega, eta, metric) + perp(omega.d(), eta, metric)
    return total.scale(Fraction(1, 2))


def levi_higher(delta: Codifferential, omega: Form, eta: Form) -> Form:
    """Extended covariant derivative along forms of any degree."""
    metric = delta.metric
    total = metric.chart.zero()
    for deg, piece in omega.parts().items():
        term = L_delta(delta, piece, eta) + lie_derivative(piece, eta, metric)
        dp = perp(piece.d(), eta, metric)
        total = total + (term + dp if deg % 2 else term - dp)
    return total.scale(Fraction(1, 2))


Connection = Callable[[Form, Form], Form]


def _connection(delta: Codifferential, connection: Connection | None) -> Connection:
    if connection is not None:
        return connection
    return lambda w, h: levi_connection(delta, w, h)


def _scalar(form: Form):
    return form.coefficient(())


def torsion(delta: Codifferential, omega: Form, eta: Form, zeta: Form, connection: Connection | None = None):
    """``T(w,h)(z) = (w, nabla_h z) - (h, nabla_w z) - i_w i_h dz``."""
    for f in (omega, eta, zeta):
        f.require_degree(1, "torsion argument")
    nab = _connection(delta, connection)
    m = delta.metric
    last = interior(omega, interior(eta, zeta.d(), m), m)
    return metric_pairing(omega, nab(eta, zeta), m) - metric_pairing(eta, nab(omega, zeta), m) - _scalar(last)


def metric_compat(delta: Codifferential, omega: Form, eta: Form, zeta: Form, connection: Connection | None = None):
    """``C_w(h,z) = (w, d(h,z)) - (nabla_w h, z) - (h, nabla_w z)``."""
    for f in (omega, eta, zeta):
        f.require_degree(1, "compatibility argument")
    nab = _connection(delta, connection)
    m = delta.metric
    chart = m.chart
    dpair = chart.scalar(metric_pairing(eta, zeta, m)).d()
    return (
        metric_pairing(omega, dpair, m)
        - metric_pairing(nab(omega, eta), zeta, m)
        - metric_pairing(eta, nab(omega, zeta), m)
    )


def curvature(delta: Codifferential, omega: Form, eta: Form, zeta: Form, connection: Connection | None = None) -> Form:
    """``R(w,h) z = nabla_w nabla_h z - nabla_h nabla_w z - nabla_{L_delta(w,h)} z``."""
    omega.require_degree(1, "curvature argument")
    eta.require_degree(1, "curvature argument")
    nab = _connection(delta, connection)
    bracket = L_delta(delta, omega, eta)
    return nab(omega, nab(eta, zeta)) - nab(eta, nab(omega, zeta)) - nab(bracket, zeta)


def hodge_laplacian(delta: Codifferential, form: Form) -> Form:
    return delta(form).d() + delta(form.d())


def laplace_beltrami(delta: Codifferential, form: Form) -> Form:
    """``nabla_{g1} nabla_{g2} - nabla_{nabla_{g1} g2}`` summed over the metric."""
    metric = delta.metric
    total = metric.chart.zero()
    correction = metric.chart.zero()
    for g1, g2 in metric.metric_pairs():
        total = total + levi_connection(delta, g1, levi_connection(delta, g2, form))
        correction = correction + levi_connection(delta, g1, g2)
    if not correction.is_zero():
        total = total - levi_connection(delta, correction, form)
    return total


def weitzenbock(delta: Codifferential, form: Form) -> Form:
    return laplace_beltrami(delta, form) - hodge_laplacian(delta, form)


def _verify_second_order(delta: Codifferential, op: Callable[[Form], Form], samples: int = 2, seed: int = 7) -> None:
    chart = delta.chart
    rng = random.Random(seed)
    for _ in range(samples):
        a = chart.scalar(chart.random_function(rng, 1, 2))
        for deg in range(chart.dim + 1):
            w = chart.random_form(rng, deg, 1, 2)
            lhs = op(a * w) - op(a) * w - a * op(w)
            rhs = levi_connection(delta, a.d(), w).scale(2)
            if not (lhs - rhs).is_zero():
                raise LeibnizatorMismatch("operator is not second order with symbol 2 nabla_{da}")


def extend_to_tensor(
    delta: Codifferential,
    op: Callable[[Form], Form],
    tensor_or_pairs,
    check: bool = True,
) -> TensorForm:
    """``B(w (x) h) = Bw (x) h + w (x) Bh + 2 nabla_{g1} w (x) nabla_{g2} h``.

    ``tensor_or_pairs`` is a ``TensorForm`` or an iterable of ``(left, right)``
    form pairs.  With ``check`` the second order Leibniz form of ``op`` is
    sampled first.
    """
    if check:
        _verify_second_order(delta, op)
    chart = delta.chart
    pairs = tensor_or_pairs.pairs() if isinstance(tensor_or_pairs, TensorForm) else list(tensor_or_pairs)
    metric_pairs = delta.metric.metric_pairs()
    out: list[tuple[Form, Form]] = []
    for left, right in pairs:
        out.append((op(left), right))
        out.append((left, op(right)))
        for g1, g2 in metric_pairs:
            out.append((levi_connection(delta, g1, left).scale(2), levi_connection(delta, g2, right)))
    return TensorForm.from_pairs(chart, out)


def ricci_via_delta(delta: Codifferential, check: bool = True) -> TensorForm:
    """``Ricci = -1/2 Delta(g)`` with the Hodge Laplacian extended to tensors."""
    lap = lambda w: hodge_laplacian(delta, w)
    return extend_to_tensor(delta, lap, delta.metric.metric_pairs(), check=check).scale(Fraction(-1, 2))


def ricci_map(delta: Codifferential, omega: Form, connection: Connection | None = None) -> Form:
    """``R(w, g1) g2`` summed over the metric."""
    total = delta.chart.zero()
    for g1, g2 in delta.metric.metric_pairs():
        total = total + curvature(delta, omega, g1, g2, connection)
    return total


def ricci_from_curvature(delta: Codifferential, connection: Connection | None = None) -> TensorForm:
    """``g1 (x) R(g2, g1') g2'`` from the reconstructed curvature."""
    pairs = [(g1, ricci_map(delta, g2, connection)) for g1, g2 in delta.metric.metric_pairs()]
    return TensorForm.from_pairs(delta.chart, pairs)


# ---------------------------------------------------------------------------
# Theta map
# ---------------------------------------------------------------------------


@dataclass
class ThetaData:
    """Metric pairing and connection recovered from a codifferential."""

    pairing: list
    metric: Metric
    delta: Codifferential

    def connection(self, omega: Form, eta: Form) -> Form:
        return levi_connection(self.delta, omega, eta)

    def matches(self, other: "ThetaData", probes: Sequence[tuple[Form, Form]]) -> bool:
        n = self.metric.dim
        for i in range(n):
            for j in range(n):
                if not (self.pairing[i][j] - other.pairing[i][j]).is_zero():
                    return False
        return all((self.connection(w, h) - other.connection(w, h)).is_zero() for w, h in probes)


def theta_map(delta: Codifferential, samples: int = 3, seed: int = 11) -> ThetaData:
    """Recover the pairing ``(dx^i, dx^j)`` from ``delta`` and the associated connection.

    The pairing is read off from ``delta(x^i dx^j) - x^i delta(dx^j)``; the
    codifferential is then checked to be regular for that pairing on random
    inputs, and the connection is the reconstruction formula applied to the
    same operator.
    """
    chart = delta.chart
    n = chart.dim
    half = Fraction(1, 2)
    raw = [[None] * n for _ in range(n)]
    for i in range(n):
        xi = chart.scalar(chart.coordinate(i))
        for j in range(n):
            dj = chart.dx(j)
            value = delta(xi * dj) - xi * delta(dj)
            if not value.is_homogeneous(0):
                raise NotRegular("delta(a dx) - a delta(dx) is not a function")
            raw[i][j] = value.coefficient(())
    pairing = [[(raw[i][j] + raw[j][i]) * half for j in range(n)] for i in range(n)]
    metric = Metric.from_pairing(chart, pairing, label="recovered")
    derived = Codifferential(metric, "custom", function=delta)
    rng = random.Random(seed)
    for _ in range(samples):
        a = chart.random_function(rng, 2, 2)
        af = chart.scalar(a)
        for deg in range(1, n + 1):
            w = chart.random_form(rng, deg, 1, 2)
            lhs = delta(af * w) - af * delta(w)
            rhs = interior(af.d(), w, metric)
            if not (lhs - rhs).is_zero():
                raise NotRegular("delta(a w) - a delta(w) is not an interior product along da")
    return ThetaData(pairing, metric, derived)


# ---------------------------------------------------------------------------
# Conformal 1-forms
# ---------------------------------------------------------------------------


@dataclass
class ConformalData:
    """A 1-form ``tau`` with conformal factor ``alpha`` and constant ``beta``."""

    tau: Form
    alpha: object
    beta: Fraction

    def alpha_form(self) -> Form:
        chart = self.tau.chart
        if isinstance(self.alpha, Form):
            return self.alpha
        return chart.scalar(self.alpha)


def conformal_check(
    delta: Codifferential,
    data: ConformalData,
    mode: str = "strong",
    samples: int = 5,
    seed: int = 0,
    tol=None,
) -> Report:
    """Residuals of the conformal identities for ``data`` on random forms.

    ``mode`` selects whether the codifferential commutator identity is tested
    on 1-forms only (``"degree1"``) or on every degree up to the dimension.
    """
    if mode not in ("degree1", "strong"):
        raise ValueError("mode must be 'degree1' or 'strong'")
    metric = delta.metric
    chart = metric.chart
    n = chart.dim
    rng = random.Random(seed)
    tau = data.tau
    tau.require_degree(1, "conformal 1-form")
    alpha = data.alpha_form()
    dalpha = alpha.d()
    beta = Fraction(data.beta)
    lie = lambda w: lie_derivative(tau, w, metric)
    i_dalpha = lambda w: interior(dalpha, w, metric)

    t_commutator = Tally("conformal.delta_commutator", tol)
    t_metric = Tally("conformal.metric", tol)
    t_killing = Tally("conformal.killing", tol)
    t_perp = Tally("conformal.lie_perp", tol)
    t_perp_bracket = Tally("conformal.lie_perp_bracket", tol)
    t_leib = Tally("conformal.lie_leibnizator", tol)
    t_lap = Tally("conformal.lie_laplacian", tol)
    t_int = Tally("conformal.lie_interior", tol)
    t_tau = Tally("conformal.tau_self", tol)

    degrees = [1] if mode == "degree1" else list(range(n + 1))

    def S(w: Form, h: Form) -> Form:
        total = chart.zero()
        for k, piece in w.parts().items():
            term = perp(piece, h.d(), metric)
            rest = perp(piece, h, metric).d() + perp(piece.d(), h, metric)
            total = total + (term + rest if k % 2 else term - rest)
        return total

    lap = lambda w: hodge_laplacian(delta, w)

    for s in range(samples):
        ctx = f"seed={seed} sample={s}"
        # commutator of delta with the Lie derivative
        for deg in degrees:
            w = chart.random_form(rng, deg)
            lhs = delta(lie(w)) - lie(delta(w))
            rhs = alpha * delta(w) + i_dalpha(w).scale(Fraction(deg) - beta)
            t_commutator.add(lhs - rhs, ctx)
        # metric and Killing identities on 1-forms
        w = chart.random_form(rng, 1)
        h = chart.random_form(rng, 1)
        pair = metric_pairing(w, h, metric)
        lhs = metric_pairing(lie(w), h, metric) + metric_pairing(w, lie(h), metric)
        rhs = metric_pairing(tau, chart.scalar(pair).d(), metric) + alpha.coefficient(()) * pair
        t_metric.add(chart.scalar(lhs - rhs), ctx)
        killing = levi_connection(delta, w, tau) - interior(w, tau.d(), metric).scale(Fraction(1, 2)) - (
            alpha * w
        ).scale(Fraction(1, 2))
        t_killing.add(killing, ctx)
        # interior product commutator
        x = chart.random_form(rng, rng.randint(0, n))
        lhs = interior(h, lie(x), metric) - lie(interior(h, x, metric))
        rhs = alpha * interior(h, x, metric) - interior(lie(h), x, metric)
        t_int.add(lhs - rhs, ctx)
        # pairs of arbitrary degrees
        for _ in range(2):
            a = chart.random_form(rng, rng.randint(0, n))
            b = chart.random_form(rng, rng.randint(0, n))
            ka, kb = a.degree, b.degree
            lhs = lie(perp(a, b, metric)) + alpha * perp(a, b, metric)
            rhs = perp(lie(a), b, metric) + perp(a, lie(b), metric)
            t_perp.add(lhs - rhs, ctx)
            lhs = lie(S(a, b)) + alpha * S(a, b) - S(lie(a), b) - S(a, lie(b))
            rhs = dalpha * perp(a, b, metric)
            t_perp_bracket.add(lhs - (rhs if ka % 2 == 0 else -rhs), ctx)
            lhs = (
                lie(L_delta(delta, a, b))
                + alpha * L_delta(delta, a, b)
                - L_delta(delta, lie(a), b)
                - L_delta(delta, a, lie(b))
            )
            first = (a * i_dalpha(b)).scale(ka)
            rhs = (-first if ka % 2 == 0 else first) - (i_dalpha(a) * b).scale(kb)
            t_leib.add(lhs - rhs, ctx)
        # Laplacian commutator
        for deg in range(n + 1):
            w = chart.random_form(rng, deg)
            lhs = lap(lie(w)) - lie(lap(w))
            rhs = (
                alpha * lap(w)
                + lie_derivative(dalpha, w, metric).scale(Fraction(deg) - beta)
                + dalpha * delta(w)
                + i_dalpha(w.d())
            )
            t_lap.add(lhs - rhs, ctx)

    t_tau.add(lie(tau) - alpha * tau, "tau")
    checks = [
        t_commutator.check(f"mode={mode}"),
        t_metric.check(),
        t_killing.check(),
        t_perp.check(),
        t_perp_bracket.check(),
        t_leib.check(),
        t_lap.check(),
        t_int.check(),
        t_tau.check(),
    ]
    if metric.invertible:
        t_alpha = Tally("conformal.alpha_divergence", tol)
        t_beta = Tally("conformal.beta_trace", tol)
        if beta != 0:
            t_alpha.add(alpha - delta(tau).scale(1 / beta), "alpha")
        trace = chart.ring.zero()
        for g1, g2 in metric.metric_pairs():
            trace = trace + metric_pairing(g1, g2, metric)
        t_beta.add(chart.scalar(trace * Fraction(1, 2) - beta), "beta")
        checks.append(t_beta.check())
        if beta != 0:
            checks.append(t_alpha.check())
    return Report("conformal", checks)
