"""Method-of-lines models for the kinetic equations on periodic grids.

Each model compiles its symbolic right-hand side once into a pointwise
evaluation plan: an expression over (coordinates, state components,
first-jet variables), where the jet variables are realized as 4th-order
stencil derivatives of the state.  The contact-momentum plan is generated
from the vertical representative of the cotangent lift, the same route the
symbolic layer uses.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .expr import Expr, ExprError, Var, VarId, canon, partial
from .grid import (
    Grid, NumericalAbortError, compile_numeric, discretize, quadrature,
    rk4_step, spatial_derivative,
)
from .jets import JetChart
from .kinetics import (
    ContactStructure, PlasmaParams, contact_cotangent_chart, plasma_chart,
    contact_vector_field, plasma_hamiltonian,
)
from .lifts import hamiltonian_vector_field, lift_decomposition
from .parser import parse_expr

__all__ = [
    "SimConfig", "ConfigError", "RunResult", "build_model", "run_simulation",
    "load_config", "temporal_order", "spatial_operator_order",
    "discrete_intertwining_error", "MODELS",
]

MODELS = ("contact-momentum", "contact-density", "vlasov-momentum", "vlasov-density")


class ConfigError(ExprError):
    pass


@dataclass(frozen=True)
class SimConfig:
    """Full description of one simulation run."""

    model: str
    n: int
    dt: float
    steps: int
    expr: str = ""                     # K for contact models
    params: dict = field(default_factory=dict)   # m, e, phi for vlasov models
    init: tuple[str, ...] = ()
    cadence: int = 10
    out: str = "traj.csv"
    diag: str = "diag.csv"
    allow_aperiodic: bool = False
    seed: int | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model '{self.model}'; choose one of {MODELS}")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.steps < 1:
            raise ConfigError("steps must be >= 1")
        if self.cadence < 1:
            raise ConfigError("cadence must be >= 1")


def load_config(path: str | Path) -> SimConfig:
    """Read a run.json file into a SimConfig."""
    with open(path) as f:
        raw = json.load(f)
    known = {"model", "K", "h", "params", "init", "n", "dt", "steps",
             "cadence", "out", "diag", "allow_aperiodic", "seed"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    try:
        return SimConfig(
            model=raw["model"],
            expr=raw.get("K", raw.get("h", "")),
            params=raw.get("params", {}),
            init=tuple(raw.get("init", ())),
            n=int(raw["n"]),
            dt=float(raw["dt"]),
            steps=int(raw["steps"]),
            cadence=int(raw.get("cadence", 10)),
            out=raw.get("out", "traj.csv"),
            diag=raw.get("diag", "diag.csv"),
            allow_aperiodic=bool(raw.get("allow_aperiodic", False)),
            seed=raw.get("seed"),
        )
    except KeyError as exc:
        raise ConfigError(f"missing config key: {exc}") from None


# ---------------------------------------------------------------------------
# model compilation

@dataclass(frozen=True)
class Model:
    """A compiled pointwise evaluation plan for one kinetic model."""

    name: str
    grid: Grid
    ncomp: int
    coord_vars: tuple[VarId, ...]
    rhs: Callable[[np.ndarray], np.ndarray]
    velocity_max: float


def _stencil_inputs(grid: Grid, state: np.ndarray, coords: list[np.ndarray],
                    ncomp: int) -> list[np.ndarray]:
    """Input vector [coords..., state comps..., D_a(comp_l)...] (l-major)."""
    h = grid.h
    inputs = list(coords)
    for l in range(ncomp):
        inputs.append(state[..., l])
    for l in range(ncomp):
        for a in range(grid.dim):
            inputs.append(spatial_derivative(state[..., l], a, h))
    return inputs


def _compile_jet_plan(jc: JetChart, grid: Grid, rate_exprs: Sequence[Expr],
                      ncomp: int) -> Callable[[np.ndarray], np.ndarray]:
    """Map base vars to coordinate grids, fibers to state, jets to stencils."""
    var_axes: dict[VarId, int] = {}
    pos = 0
    for v in jc.base:
        var_axes[v] = pos
        pos += 1
    for v in jc.fiber:
        var_axes[v] = pos
        pos += 1
    for l in range(jc.k):
        for a in range(jc.m):
            var_axes[jc.jet(l, a)] = pos
            pos += 1
    fns = [compile_numeric(e, var_axes) for e in rate_exprs]
    coords = [grid.axis_coordinate(a) for a in range(grid.dim)]

    def rhs(state: np.ndarray) -> np.ndarray:
        inputs = _stencil_inputs(grid, state, coords, ncomp)
        out = np.empty_like(state)
        for l, fn in enumerate(fns):
            val = fn(inputs)
            out[..., l] = val if np.ndim(val) else float(val)
        return out

    return rhs


def _contact_momentum_plan(cs: ContactStructure, K: Expr) -> tuple[JetChart, list[Expr]]:
    """Rate expressions from V(X_K^{c*}) plus the divergence term."""
    c6 = contact_cotangent_chart(cs)
    v_part, _ = lift_decomposition(c6, contact_vector_field(cs, K))
    jc = v_part.jet_chart
    kz = partial(K, cs.z)
    rates = []
    for l in range(3):
        rates.append(canon(v_part.fiber_components[l] + 2 * kz * Var(jc.fiber[l])))
    return jc, rates


def _contact_density_plan(cs: ContactStructure, K: Expr) -> tuple[JetChart, list[Expr]]:
    """L_dot = -{L,K}_c + 4 K_z L with state derivatives as jet variables."""
    jc = JetChart.from_chart(cs.chart, ["L"])
    state = Var(jc.fiber[0])
    lx, ly, lz = (Var(jc.jet(0, a)) for a in range(3))
    x = Var(jc.base[0])
    kx, ky, kz = (partial(K, v) for v in (cs.x, cs.y, cs.z))
    bracket = lx * ky - ly * kx + kz * (state - x * lx) - lz * (K - x * kx)
    return jc, [canon(bracket * -1 + 4 * kz * state)]


def contact_density_map_plan(cs: ContactStructure) -> tuple[JetChart, Expr]:
    """The density map with state derivatives as jet variables."""
    jc = JetChart.from_chart(cs.chart, ["a_x", "a_y", "a_z"])
    x = Var(jc.base[0])
    ax, ay, az = (Var(jc.fiber[l]) for l in range(3))
    e = (Var(jc.jet(1, 0)) - Var(jc.jet(0, 1))
         - x * Var(jc.jet(2, 0)) + x * Var(jc.jet(0, 2)) - 2 * az)
    return jc, canon(e)


def _vlasov_plans(params: PlasmaParams, density: bool) -> tuple[JetChart, list[Expr]]:
    pc = plasma_chart(1)
    q, p = pc.base_var(0), pc.fiber_var(0)
    names = [v.name for v in pc.full.vars]
    if density:
        jc = JetChart.make(names, ["f"])
        f = Var(jc.fiber[0])
        fq, fp = Var(jc.jet(0, 0)), Var(jc.jet(0, 1))
        pv = Var(jc.base[1])
        phi_q = partial(params.phi, q)
        # the potential lives on q; rebuild it over the jet chart's q
        phi_q = _rebind(phi_q, {q: Var(jc.base[0])})
        rate = canon(pv / params.mass * fq * -1 + phi_q * fp * params.charge)
        return jc, [rate]
    jc = JetChart.make(names, ["P1", "P2"])
    qj, pj = Var(jc.base[0]), Var(jc.base[1])
    phi_q = _rebind(partial(params.phi, q), {q: qj})
    phi_qq = _rebind(partial(partial(params.phi, q), q), {q: qj})
    p1, p2 = Var(jc.fiber[0]), Var(jc.fiber[1])

    def x_h(l: int) -> Expr:
        # X_h(g) with g's derivatives as jet variables
        gq, gp = Var(jc.jet(l, 0)), Var(jc.jet(l, 1))
        return pj / params.mass * gq - phi_q * gp * params.charge

    rate1 = canon(x_h(0) * -1 + phi_qq * p2 * params.charge)
    rate2 = canon(x_h(1) * -1 - p1 / params.mass)
    return jc, [rate1, rate2]


def _rebind(e: Expr, mapping: dict[VarId, Expr]) -> Expr:
    from .expr import substitute
    return substitute(e, mapping)


def _parse_params(cfg: SimConfig) -> PlasmaParams:
    p = cfg.params
    try:
        mass = Fraction(str(p.get("m", "1")))
        charge = Fraction(str(p.get("e", "1")))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational parameter: {exc}") from None
    pc = plasma_chart(1)
    phi_text = str(p.get("phi", "0"))
    try:
        phi = parse_expr(phi_text, [pc.base_var(0)])
    except ExprError as exc:
        raise ConfigError(f"bad potential phi: {exc}") from None
    return PlasmaParams(mass, charge, phi)


def _velocity_arrays(model: str, grid: Grid, cs: ContactStructure | None,
                     K: Expr | None, params: PlasmaParams | None) -> list[np.ndarray]:
    coords = [grid.axis_coordinate(a) for a in range(grid.dim)]
    if model.startswith("contact"):
        X = contact_vector_field(cs, K)
        var_axes = {v: i for i, v in enumerate(cs.chart.vars)}
        return [compile_numeric(c, var_axes)(coords) for c in X.components]
    pc = plasma_chart(1)
    h = plasma_hamiltonian(pc, params)
    X = hamiltonian_vector_field(pc, h)
    var_axes = {pc.base_var(0): 0, pc.fiber_var(0): 1}
    return [compile_numeric(c, var_axes)(coords) for c in X.components]


def build_model(cfg: SimConfig) -> Model:
    """Compile the symbolic RHS for cfg into a grid evaluation plan."""
    if cfg.model.startswith("contact"):
        grid = Grid(3, cfg.n)
        cs = ContactStructure.standard()
        if not cfg.expr:
            raise ConfigError("contact models need the generator K")
        try:
            K = parse_expr(cfg.expr, cs.chart.vars)
        except ExprError as exc:
            raise ConfigError(f"bad K: {exc}") from None
        if cfg.model == "contact-momentum":
            jc, rates = _contact_momentum_plan(cs, K)
            ncomp = 3
        else:
            jc, rates = _contact_density_plan(cs, K)
            ncomp = 1
        coord_vars = cs.chart.vars
        vel = _velocity_arrays(cfg.model, grid, cs, K, None)
    else:
        grid = Grid(2, cfg.n)
        params = _parse_params(cfg)
        if cfg.expr:
            # an explicit Hamiltonian must match the one the parameters build
            pc = plasma_chart(1)
            try:
                h_text = parse_expr(cfg.expr, pc.full.vars)
            except ExprError as exc:
                raise ConfigError(f"bad h: {exc}") from None
            from .expr import expr_equal
            if (_is_rational_pair(h_text, pc, params)
                    and not expr_equal(h_text, plasma_hamiltonian(pc, params))):
                raise ConfigError("h does not match the Hamiltonian built from params")
        jc, rates = _vlasov_plans(params, density=cfg.model == "vlasov-density")
        ncomp = 1 if cfg.model == "vlasov-density" else 2
        coord_vars = tuple(jc.base)
        vel = _velocity_arrays(cfg.model, grid, None, None, params)
    if len(cfg.init) != ncomp:
        raise ConfigError(f"model '{cfg.model}' needs {ncomp} initial component(s), got {len(cfg.init)}")
    rhs = _compile_jet_plan(jc, grid, rates, ncomp)
    vmax = max(float(np.max(np.abs(v))) for v in vel)
    return Model(cfg.model, grid, ncomp, tuple(jc.base), rhs, vmax)


def _is_rational_pair(h_text, pc, params) -> bool:
    from .expr import is_rational
    return is_rational(h_text) and is_rational(plasma_hamiltonian(pc, params))


def initial_state(cfg: SimConfig, model: Model) -> np.ndarray:
    var_axes = {v: i for i, v in enumerate(model.coord_vars)}
    comps = []
    for text in cfg.init:
        try:
            e = parse_expr(text, list(model.coord_vars))
        except ExprError as exc:
            raise ConfigError(f"bad initial data '{text}': {exc}") from None
        comps.append(discretize(e, model.grid, var_axes,
                                allow_aperiodic=cfg.allow_aperiodic))
    return np.stack(comps, axis=-1)


# ---------------------------------------------------------------------------
# the run loop

@dataclass
class RunResult:
    times: list[float]
    diagnostics: list[tuple[float, float, float, float, float]]
    out_path: str
    diag_path: str
    manifest_path: str
    aborted_at: int | None = None


def _diag_row(t: float, state: np.ndarray, grid: Grid
              ) -> tuple[float, float, float, float, float]:
    # mass: sum of per-component torus integrals
    mass = sum(quadrature(state[..., l], grid.h, grid.dim)
               for l in range(state.shape[-1]))
    l2 = math.sqrt(quadrature(np.sum(state * state, axis=-1), grid.h, grid.dim))
    return (t, mass, l2, float(state.min()), float(state.max()))


def _write_traj_header(f, ncomp: int) -> None:
    comps = ",".join(f"comp{i}" for i in range(ncomp))
    f.write(f"t,i,j,k,{comps}\n")


def _write_traj_snapshot(f, t: float, state: np.ndarray, grid: Grid) -> None:
    dims = grid.dim
    ncomp = state.shape[-1]
    flat = state.reshape(-1, ncomp)
    idx = np.indices(grid.shape).reshape(dims, -1)
    for row in range(flat.shape[0]):
        ijk = [int(idx[d, row]) for d in range(dims)] + [0] * (3 - dims)
        vals = ",".join(repr(float(v)) for v in flat[row])
        f.write(f"{t!r},{ijk[0]},{ijk[1]},{ijk[2]},{vals}\n")


def run_simulation(cfg: SimConfig) -> RunResult:
    """Integrate the configured model, writing trajectory, diagnostics and
    a manifest.  Deterministic for a fixed config."""
    model = build_model(cfg)
    state = initial_state(cfg, model)
    grid = model.grid
    cfl = grid.h / (4.0 * model.velocity_max) if model.velocity_max > 0 else math.inf
    if cfg.dt > cfl:
        warnings.warn(f"dt={cfg.dt} exceeds the CFL advisory {cfl:.3e}", RuntimeWarning)
    manifest_path = cfg.out + ".manifest.json"
    manifest = {
        "config": {
            "model": cfg.model, "K": cfg.expr, "params": cfg.params,
            "init": list(cfg.init), "n": cfg.n, "dt": cfg.dt,
            "steps": cfg.steps, "cadence": cfg.cadence, "out": cfg.out,
            "diag": cfg.diag, "allow_aperiodic": cfg.allow_aperiodic,
            "seed": cfg.seed,
        },
        "version": __version__,
        "grid": {"dim": grid.dim, "n": grid.n, "h": grid.h},
        "cfl_advisory_dt": None if math.isinf(cfl) else cfl,
    }
    result = RunResult([], [], cfg.out, cfg.diag, manifest_path)
    aborted: NumericalAbortError | None = None
    with open(cfg.out, "w") as traj, open(cfg.diag, "w") as diag:
        _write_traj_header(traj, model.ncomp)
        diag.write("t,mass,l2,min,max\n")

        def emit(t: float, s: np.ndarray) -> None:
            _write_traj_snapshot(traj, t, s, grid)
            row = _diag_row(t, s, grid)
            diag.write(",".join(repr(v) if isinstance(v, float) else str(v)
                                for v in row) + "\n")
            result.times.append(t)
            result.diagnostics.append(row)

        emit(0.0, state)
        try:
            for step in range(1, cfg.steps + 1):
                state = rk4_step(state, model.rhs, cfg.dt, step)
                if step % cfg.cadence == 0:
                    emit(step * cfg.dt, state)
        except NumericalAbortError as exc:
            aborted = exc
            result.aborted_at = exc.step
            traj.flush()
            diag.flush()
    manifest["aborted_at_step"] = result.aborted_at
    with open(manifest_path, "w") as mf:
        json.dump(manifest, mf, indent=2, sort_keys=True)
        mf.write("\n")
    if aborted is not None:
        raise aborted
    return result


# ---------------------------------------------------------------------------
# convergence harnesses

def _integrate(model: Model, state: np.ndarray, dt: float, steps: int) -> np.ndarray:
    for step in range(1, steps + 1):
        state = rk4_step(state, model.rhs, dt, step)
    return state


def temporal_order(cfg: SimConfig, dts: Sequence[float], t_end: float
                   ) -> tuple[float, list[float]]:
    """Richardson order in dt on a fixed grid: all runs share the spatial
    operator, so successive differences isolate the time integrator."""
    model = build_model(cfg)
    state0 = initial_state(cfg, model)
    finals = []
    for dt in dts:
        steps = round(t_end / dt)
        if abs(steps * dt - t_end) > 1e-12:
            raise ConfigError(f"t_end {t_end} is not a multiple of dt {dt}")
        finals.append(_integrate(model, state0.copy(), dt, steps))
    diffs = [float(np.max(np.abs(a - b))) for a, b in zip(finals, finals[1:])]
    orders = [math.log2(d1 / d2) / math.log2(dts[i] / dts[i + 1])
              for i, (d1, d2) in enumerate(zip(diffs, diffs[1:]))]
    return min(orders), diffs


def spatial_operator_order(make_cfg: Callable[[int], SimConfig],
                           exact_rate: Sequence[Expr], ns: Sequence[int]
                           ) -> tuple[float, list[float]]:
    """Stencil order of the semi-discrete operator on a manufactured field.

    Compares the compiled RHS applied to sampled initial data against the
    exact symbolic rate evaluated pointwise; clean O(h^4) on smooth data.
    """
    errs = []
    for n in ns:
        cfg = make_cfg(n)
        model = build_model(cfg)
        state = initial_state(cfg, model)
        rate = model.rhs(state)
        var_axes = {v: i for i, v in enumerate(model.coord_vars)}
        err = 0.0
        for l, e in enumerate(exact_rate):
            exact = discretize(e, model.grid, var_axes, allow_aperiodic=True)
            err = max(err, float(np.max(np.abs(rate[..., l] - exact))))
        errs.append(err)
    orders = [math.log2(e1 / e2) / math.log2(ns[i + 1] / ns[i])
              for i, (e1, e2) in enumerate(zip(errs, errs[1:]))]
    return min(orders), errs


def discrete_intertwining_error(K_text: str, alpha_init: Sequence[str],
                                density_init: str, n: int, dt: float,
                                steps: int, cadence: int,
                                allow_aperiodic: bool = True
                                ) -> tuple[float, float]:
    """Max-norm gap between (evolve alpha, map to density) and (evolve density).

    The density map is the discretized coordinate formula with the same
    stencils the models use.  Returns (global gap, gap away from the x-seam):
    the Darboux coefficient x is aperiodic on the torus, so rows around the
    x-seam are polluted at O(1) regardless of resolution, and the -x d/dx
    advection drags a pollution wake inward from the x = 2pi side; the
    second number excludes those bands, purely as a diagnostic.
    """
    cs = ContactStructure.standard()
    cfg_m = SimConfig(model="contact-momentum", n=n, dt=dt, steps=steps,
                      expr=K_text, init=tuple(alpha_init),
                      allow_aperiodic=allow_aperiodic)
    cfg_d = SimConfig(model="contact-density", n=n, dt=dt, steps=steps,
                      expr=K_text, init=(density_init,),
                      allow_aperiodic=allow_aperiodic)
    mom = build_model(cfg_m)
    den = build_model(cfg_d)
    state_m = initial_state(cfg_m, mom)
    state_d = initial_state(cfg_d, den)
    jc, map_expr = contact_density_map_plan(cs)
    map_rhs = _compile_jet_plan(jc, mom.grid, [map_expr], 3)
    # wake length ~ 2pi(1 - e^{-t_end}) plus the stencil halo
    wake = 2.0 * math.pi * (1.0 - math.exp(-dt * steps))
    lo = max(4, n // 16)
    hi = max(4, int(math.ceil(wake / (2.0 * math.pi) * n)) + 2)
    hi = min(hi, n // 2)

    def compare(sm: np.ndarray, sd: np.ndarray) -> tuple[float, float]:
        gap = np.abs(map_rhs(sm)[..., 0] - sd[..., 0])
        return float(gap.max()), float(gap[lo:n - hi].max())

    worst, worst_interior = compare(state_m, state_d)
    for step in range(1, steps + 1):
        state_m = rk4_step(state_m, mom.rhs, dt, step)
        state_d = rk4_step(state_d, den.rhs, dt, step)
        if step % cadence == 0 or step == steps:
            g, gi = compare(state_m, state_d)
            worst, worst_interior = max(worst, g), max(worst_interior, gi)
    return worst, worst_interior
