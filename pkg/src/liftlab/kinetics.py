"""Lie-Poisson machinery on one-form densities and its three instances:
ideal fluid (symbolic only), Vlasov plasma on T*Q, and contact particles
in Darboux coordinates.

The canonical right-hand-side path is always the strong coadjoint formula

    alpha_dot = -L_X alpha - (div_dmu X) alpha.

The printed Hamiltonian operators are implemented verbatim as well, but
they are meant for weak-form probing under torus quadrature only; their
strong forms are not asserted against the coadjoint path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expr import (
    Expr, ExprError, Var, VarId, ZERO, ONE, canon, expr_equal, free_vars,
    is_rational, is_zero_expr, partial, substitute,
)
from .geometry import (
    Chart, ChartError, ChartMismatchError, DifferentialForm, VectorField,
    VolumeForm, divergence, exterior_derivative, interior_product,
    lie_derivative_form, one_form, pointwise_pairing, wedge,
)
from .lifts import (
    CotangentChart, complete_cotangent_lift, hamiltonian_vector_field,
    lift_decomposition,
)

__all__ = [
    "MomentumDensity", "PlasmaParams", "PlasmaMomentum", "ContactStructure",
    "NonDivergenceFreeError",
    "lie_poisson_rhs", "fluid_rhs", "vorticity_rhs",
    "plasma_chart", "plasma_hamiltonian", "plasma_density", "plasma_dual_ok",
    "vlasov_momentum_rhs", "vlasov_density_rhs",
    "contact_vector_field", "reeb_field", "contact_bracket",
    "contact_density", "contact_dual_ok", "contact_momentum_rhs",
    "contact_momentum_rhs_via_lift", "contact_density_rhs",
    "hamiltonian_operator_momentum", "hamiltonian_operator_density",
    "operator_relation_probe", "contact_lift", "contact_cotangent_chart",
]


class NonDivergenceFreeError(ExprError):
    pass


# ---------------------------------------------------------------------------
# coadjoint flow on one-form densities

@dataclass(frozen=True)
class MomentumDensity:
    """alpha (x) dmu: a one-form density against a fixed volume form."""

    alpha: DifferentialForm
    vol: VolumeForm

    def __post_init__(self):
        if self.alpha.degree != 1:
            raise ChartError("momentum density needs a one-form")
        if self.alpha.chart != self.vol.chart:
            raise ChartMismatchError("one-form and volume form live on different charts")


def lie_poisson_rhs(X: VectorField, md: MomentumDensity) -> DifferentialForm:
    """alpha_dot = -L_X alpha - (div_dmu X) alpha."""
    if X.chart != md.alpha.chart:
        raise ChartMismatchError("field and momentum density live on different charts")
    div = divergence(X, md.vol)
    return lie_derivative_form(X, md.alpha).scaled(-1) - md.alpha.scaled(div)


def _require_div_free(X: VectorField, vol: VolumeForm) -> None:
    div = divergence(X, vol)
    if not is_rational(div) or not is_zero_expr(div):
        raise NonDivergenceFreeError(f"field has divergence {div}, expected 0")


def fluid_rhs(upsilon: DifferentialForm, X: VectorField,
              vol: VolumeForm | None = None) -> DifferentialForm:
    """d[Upsilon]/dt = -L_X Upsilon for divergence-free X.

    The physical state is the class [Upsilon] modulo exact one-forms;
    compare evolutions of two representatives with is_exact_candidate on
    their difference.
    """
    if upsilon.degree != 1:
        raise ChartError("fluid momentum is a one-form")
    vol = vol or VolumeForm.standard(X.chart)
    _require_div_free(X, vol)
    return lie_derivative_form(X, upsilon).scaled(-1)


def vorticity_rhs(omega: DifferentialForm, X: VectorField,
                  vol: VolumeForm | None = None) -> DifferentialForm:
    """omega_dot = -L_X omega on two-forms; d o fluid_rhs = vorticity_rhs o d."""
    if omega.degree != 2:
        raise ChartError("vorticity is a two-form")
    vol = vol or VolumeForm.standard(X.chart)
    _require_div_free(X, vol)
    return lie_derivative_form(X, omega).scaled(-1)


# ---------------------------------------------------------------------------
# collisionless plasma on T*Q

def plasma_chart(n: int = 1) -> CotangentChart:
    """Darboux chart (q^i, p_i) on T*Q for Q of dimension n."""
    if n == 1:
        base = Chart.make("q")
        return CotangentChart.make(base, ["p"])
    base = Chart.make(*[f"q{i + 1}" for i in range(n)])
    return CotangentChart.make(base, [f"p{i + 1}" for i in range(n)])


@dataclass(frozen=True)
class PlasmaParams:
    """Particle mass, charge, and the prescribed (time-fixed) potential."""

    mass: Fraction
    charge: Fraction
    phi: Expr

    def __post_init__(self):
        if self.mass == 0:
            raise ExprError("particle mass must be nonzero")


def plasma_hamiltonian(pc: CotangentChart, params: PlasmaParams) -> Expr:
    """h = (1/2m) sum_i p_i^2 + e phi(q)."""
    qvars = {pc.base_var(i) for i in range(pc.m)}
    if free_vars(params.phi) - qvars:
        raise ChartError("potential must depend on position variables only")
    kinetic: Expr = ZERO
    for i in range(pc.m):
        kinetic = kinetic + Var(pc.fiber_var(i)) ** 2
    return canon(kinetic * Fraction(1, 2) / params.mass + params.phi * params.charge)


@dataclass(frozen=True)
class PlasmaMomentum:
    """Pi = Pi_i dq^i + Pi^i dp_i on a plasma chart."""

    chart: CotangentChart
    down: tuple[Expr, ...]   # coefficients of dq^i
    up: tuple[Expr, ...]     # coefficients of dp_i

    def __post_init__(self):
        if len(self.down) != self.chart.m or len(self.up) != self.chart.m:
            raise ChartError("component counts must match the chart dimension")
        object.__setattr__(self, "down", tuple(canon(c) for c in self.down))
        object.__setattr__(self, "up", tuple(canon(c) for c in self.up))

    def as_one_form(self) -> DifferentialForm:
        return one_form(self.chart.full, self.down + self.up)


def plasma_density(pi: PlasmaMomentum) -> Expr:
    """f = dPi^i/dq^i - dPi_i/dp_i, the momentum map to densities."""
    pc = pi.chart
    out: Expr = ZERO
    for i in range(pc.m):
        out = out + partial(pi.up[i], pc.base_var(i)) - partial(pi.down[i], pc.fiber_var(i))
    return canon(out)


def plasma_dual_ok(pi: PlasmaMomentum) -> bool:
    """Admissibility: the induced density is not identically zero."""
    return not is_zero_expr(plasma_density(pi))


def vlasov_momentum_rhs(pi: PlasmaMomentum, params: PlasmaParams) -> PlasmaMomentum:
    """Vlasov equations in momentum variables, written exactly as displayed:

        Pi_i_dot = -X_h(Pi_i) + e (d2 phi / dq^i dq^j) Pi^j
        Pi^i_dot = -X_h(Pi^i) - (1/m) delta^{ij} Pi_j
    """
    pc = pi.chart
    h = plasma_hamiltonian(pc, params)
    X_h = hamiltonian_vector_field(pc, h)
    down = []
    up = []
    for i in range(pc.m):
        rate_down = X_h.apply(pi.down[i]) * -1
        for j in range(pc.m):
            hess = partial(partial(params.phi, pc.base_var(i)), pc.base_var(j))
            rate_down = rate_down + hess * pi.up[j] * params.charge
        down.append(canon(rate_down))
        rate_up = X_h.apply(pi.up[i]) * -1 - pi.down[i] / params.mass
        up.append(canon(rate_up))
    return PlasmaMomentum(pc, tuple(down), tuple(up))


def vlasov_density_rhs(pc: CotangentChart, f: Expr, params: PlasmaParams) -> Expr:
    """f_dot = -(p_i/m) df/dq^i + e (dphi/dq^i) df/dp_i."""
    out: Expr = ZERO
    for i in range(pc.m):
        out = out - Var(pc.fiber_var(i)) / params.mass * partial(f, pc.base_var(i))
        out = out + partial(params.phi, pc.base_var(i)) * partial(f, pc.fiber_var(i)) * params.charge
    return canon(out)


# ---------------------------------------------------------------------------
# contact particles in 3D Darboux coordinates

@dataclass(frozen=True)
class ContactStructure:
    """sigma = x dy + dz on a 3D chart, with Reeb field and volume dsigma^sigma."""

    chart: Chart
    sigma: DifferentialForm
    reeb: VectorField
    vol: VolumeForm

    @classmethod
    def standard(cls, names: Sequence[str] = ("x", "y", "z")) -> "ContactStructure":
        if len(names) != 3:
            raise ChartError("contact chart is three dimensional")
        chart = Chart.make(*names)
        x = Var(chart.vars[0])
        sigma = one_form(chart, (ZERO, x, ONE))
        reeb = VectorField(chart, (ZERO, ZERO, ONE))
        vol_form = wedge(exterior_derivative(sigma), sigma)
        vol = VolumeForm(vol_form)   # raises if dsigma ^ sigma degenerates
        cs = cls(chart, sigma, reeb, vol)
        if not expr_equal(pointwise_pairing(sigma, reeb), ONE):
            raise ChartError("Reeb field does not pair to 1 with sigma")
        if not interior_product(reeb, exterior_derivative(sigma)).is_zero():
            raise ChartError("Reeb field does not annihilate dsigma")
        return cs

    @property
    def x(self) -> VarId:
        return self.chart.vars[0]

    @property
    def y(self) -> VarId:
        return self.chart.vars[1]

    @property
    def z(self) -> VarId:
        return self.chart.vars[2]


def reeb_field(cs: ContactStructure) -> VectorField:
    """The unique R with i_R sigma = 1 and i_R dsigma = 0 (here d/dz)."""
    return cs.reeb


def contact_vector_field(cs: ContactStructure, K: Expr) -> VectorField:
    """X_K = (K_y - x K_z) d/dx - K_x d/dy + (-K + x K_x) d/dz."""
    x = Var(cs.x)
    kx, ky, kz = (partial(K, v) for v in (cs.x, cs.y, cs.z))
    return VectorField(cs.chart, (
        canon(ky - x * kz),
        canon(kx * -1),
        canon(x * kx - K),
    ))


def contact_bracket(cs: ContactStructure, L: Expr, K: Expr) -> Expr:
    """{L,K}_c = L_x K_y - L_y K_x + K_z (L - x L_x) - L_z (K - x K_x)."""
    x = Var(cs.x)
    lx, ly, lz = (partial(L, v) for v in (cs.x, cs.y, cs.z))
    kx, ky, kz = (partial(K, v) for v in (cs.x, cs.y, cs.z))
    return canon(lx * ky - ly * kx + kz * (L - x * lx) - lz * (K - x * kx))


def contact_density(cs: ContactStructure, alpha: DifferentialForm,
                    cross_check: bool = True) -> Expr:
    """L with L dsigma^sigma = d(alpha)^sigma - 2 alpha^dsigma.

    Coordinate formula; for rational input the wedge identity is verified.
    """
    if alpha.degree != 1 or alpha.chart != cs.chart:
        raise ChartError("contact density takes a one-form on the contact chart")
    ax, ay, az = (alpha.coeff((i,)) for i in range(3))
    x = Var(cs.x)
    L = canon(partial(ay, cs.x) - partial(ax, cs.y)
              - x * partial(az, cs.x) + x * partial(ax, cs.z) - az * 2)
    if cross_check and is_rational(L) and all(is_rational(c) for c in (ax, ay, az)):
        dsigma = exterior_derivative(cs.sigma)
        lhs = wedge(exterior_derivative(alpha), cs.sigma) - wedge(alpha, dsigma).scaled(2)
        coeff = lhs.coeff((0, 1, 2))
        if not expr_equal(canon(coeff / cs.vol.coefficient), L):
            raise ExprError("contact density formula disagrees with the wedge identity")
    return L


def contact_dual_ok(cs: ContactStructure, alpha: DifferentialForm) -> bool:
    """Admissibility: d(alpha)^sigma - 2 alpha^dsigma is not identically zero."""
    return not is_zero_expr(contact_density(cs, alpha))


def contact_momentum_rhs(cs: ContactStructure, alpha: DifferentialForm,
                         K: Expr) -> DifferentialForm:
    """Coadjoint path: alpha_dot = -L_{X_K} alpha - (div X_K) alpha."""
    X = contact_vector_field(cs, K)
    md = MomentumDensity(alpha, cs.vol)
    return lie_poisson_rhs(X, md)


def contact_cotangent_chart(cs: ContactStructure) -> CotangentChart:
    """Induced chart (x, y, z, a_x, a_y, a_z) on T* of the contact manifold."""
    names = [f"a_{v.name}" for v in cs.chart.vars]
    return CotangentChart.make(cs.chart, names)


def contact_lift(cs: ContactStructure, K: Expr) -> VectorField:
    """Complete cotangent lift of X_K on the six-dimensional chart.

    Derived directly from the lift formula applied to X_K; this is the
    normative construction (the compact operator abbreviations sometimes
    quoted for it are display shorthand only).
    """
    c6 = contact_cotangent_chart(cs)
    return complete_cotangent_lift(c6, contact_vector_field(cs, K))


def contact_momentum_rhs_via_lift(cs: ContactStructure, alpha: DifferentialForm,
                                  K: Expr) -> DifferentialForm:
    """Lift path: alpha_dot = V(X_K^{c*})(alpha) - (div X_K) alpha.

    The vertical representative lives on the synthetic jet chart; reading
    alpha as a section substitutes the fiber and first-jet variables.
    """
    if alpha.degree != 1 or alpha.chart != cs.chart:
        raise ChartError("expected a one-form on the contact chart")
    c6 = contact_cotangent_chart(cs)
    v_part, _ = lift_decomposition(c6, contact_vector_field(cs, K))
    jc = v_part.jet_chart
    bindings: dict[VarId, Expr] = {}
    comps = [alpha.coeff((i,)) for i in range(3)]
    for l in range(3):
        bindings[jc.fiber[l]] = comps[l]
        for a in range(3):
            bindings[jc.jet(l, a)] = partial(comps[l], cs.chart.vars[a])
    div = divergence(contact_vector_field(cs, K), cs.vol)
    out = []
    for l in range(3):
        rate = substitute(v_part.fiber_components[l], bindings)
        out.append(canon(rate - div * comps[l]))
    return one_form(cs.chart, tuple(out))


def contact_density_rhs(cs: ContactStructure, L: Expr, K: Expr) -> Expr:
    """L_dot = -{L,K}_c - 2 (div X_K) L = -{L,K}_c + 4 K_z L."""
    kz = partial(K, cs.z)
    return canon(contact_bracket(cs, L, K) * -1 + kz * L * 4)


def hamiltonian_operator_momentum(cs: ContactStructure, alpha: DifferentialForm,
                                  X: VectorField) -> DifferentialForm:
    """The printed 3x3 momentum-layer Hamiltonian operator applied to X.

    Row i, column j is  alpha_j d/dx^i + d/dx^j . alpha_i  with an overall
    minus sign; exposed for weak-form probing under quadrature only.
    """
    if alpha.degree != 1 or alpha.chart != cs.chart or X.chart != cs.chart:
        raise ChartError("operator arguments must live on the contact chart")
    a = [alpha.coeff((i,)) for i in range(3)]
    comps = []
    for i in range(3):
        entry: Expr = ZERO
        for j in range(3):
            entry = entry + a[j] * partial(X.components[j], cs.chart.vars[i])
            entry = entry + partial(canon(a[i] * X.components[j]), cs.chart.vars[j])
        comps.append(canon(entry * -1))
    return one_form(cs.chart, tuple(comps))


def hamiltonian_operator_density(cs: ContactStructure, L: Expr, K: Expr) -> Expr:
    """The printed density-layer operator: J(L) K = X_L(K) + (4L + L_z) K_z.

    Exposed for weak-form probing only; its strong form is not asserted
    against the coadjoint equation (known zeroth- vs first-order mismatch).
    """
    X_L = contact_vector_field(cs, L)
    kz = partial(K, cs.z)
    lz = partial(L, cs.z)
    return canon(X_L.apply(K) + (L * 4 + lz) * kz)


def operator_relation_probe(cs: ContactStructure, H: Expr, K: Expr,
                            alpha: DifferentialForm, n: int = 32
                            ) -> tuple[float, float]:
    """Torus-quadrature values of the two sides relating the printed
    operators: (int H J(L) K dmu, -int <X_H, J(alpha) X_K> dmu) with
    L the density of alpha.  Returned for comparison by the caller; the
    relation is probed, never asserted.
    """
    from .grid import Grid, discretize, quadrature
    grid = Grid(3, n)
    var_axes = {v: i for i, v in enumerate(cs.chart.vars)}
    L = contact_density(cs, alpha, cross_check=False)
    lhs_integrand = canon(H * hamiltonian_operator_density(cs, L, K))
    jx = hamiltonian_operator_momentum(cs, alpha, contact_vector_field(cs, K))
    rhs_integrand = canon(pointwise_pairing(jx, contact_vector_field(cs, H)) * -1)
    lhs = quadrature(discretize(lhs_integrand, grid, var_axes,
                                allow_aperiodic=True), grid.h, grid.dim)
    rhs = quadrature(discretize(rhs_integrand, grid, var_axes,
                                allow_aperiodic=True), grid.h, grid.dim)
    return lhs, rhs
