"""
Reference solutions in double precision: classical RK4 on the method-of-lines
discretization of a PDE, or on a finite window of a lattice.

Both use frozen boundaries: the edge points keep their initial values, and
only points inside the trust region are meant for comparisons.
"""
import math
import time
from fractions import Fraction

import numpy as np
from tqdm import tqdm

from evoseries.modules.expr.evaluate import compile_array, evaluate_array
from evoseries.modules.expr.nodes import Dx, Dxx, Shift
from evoseries.modules.load.problem import DDE, PDE
from evoseries.modules.numeric.grid import GridSolution
from evoseries.modules.utils.errors import BlowUp, StabilityViolation, UnresolvedOperator, ValidationError
from evoseries.modules.utils.util import log, to_fraction

BLOW_UP_LIMIT = 1e10
DEFAULT_HALF_WIDTH = 20
DEFAULT_POINTS = 400
MIN_POINTS = 16
DEFAULT_WINDOW = 20
MIN_WINDOW = 8
DEFAULT_LATTICE_DT = 1e-3
DEFAULT_SAVES = 100


def _check_values(y, t):
    if not np.all(np.isfinite(y)):
        raise BlowUp("non-finite value at t = {:.6g}".format(t))
    worst = float(np.max(np.abs(y))) if y.size else 0.0
    if worst > BLOW_UP_LIMIT:
        raise BlowUp("|value| = {:.3e} exceeds {:.0e} at t = {:.6g}".format(worst, BLOW_UP_LIMIT, t))


def rk4_integrate(rhs, y0, dt, steps, save_every=1, verbose=False):
    """
    Classical fourth-order Runge-Kutta for y' = rhs(y).

    Parameters
    ----------
    rhs : callable
        Maps an array shaped like ``y0`` to its time derivative.
    y0 : array_like
    dt : float
    steps : int
    save_every : int
        Keep every ``save_every``-th state; the last state is always kept.

    Returns
    -------
    times : numpy.ndarray
    states : numpy.ndarray of shape (len(times),) + y0.shape

    Raises
    ------
    BlowUp
        A state holds a non-finite value or one larger than 1e10 in magnitude.
    """
    y = np.array(y0, dtype=float)
    _check_values(y, 0.0)
    times, states = [0.0], [y.copy()]
    for step in tqdm(range(1, steps + 1), desc="rk4", disable=not verbose):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = step * dt
        _check_values(y, t)
        if step % save_every == 0 or step == steps:
            times.append(t)
            states.append(y.copy())
    return np.array(times), np.stack(states)


def _bindings(spec, params):
    params = {k: to_fraction(v) for k, v in (params or {}).items()}
    missing = [p for p in spec.parameters if p not in params]
    if missing:
        raise ValidationError("parameter {} is not bound".format(missing[0]))
    return params, {k: float(v) for k, v in params.items()}


def _steps(t_end, dt):
    if t_end < 0:
        raise ValidationError("t_end must be non-negative, got {}".format(t_end))
    if t_end == 0:
        return 0, dt
    steps = int(math.ceil(t_end / dt - 1e-9))
    return steps, t_end / steps


def _save_every(steps, saves):
    return max(1, steps // max(1, saves)) if steps else 1


def _broadcast(value, shape):
    return np.broadcast_to(np.asarray(value, dtype=float), shape)


def _initial_state(spec, grid, values, initial):
    rows = []
    for f in spec.fields:
        if initial is not None and f in initial:
            row = np.asarray(initial[f], dtype=float)
        else:
            row = evaluate_array(spec.initial[f], {**values, spec.space: grid})
        rows.append(np.array(_broadcast(row, grid.shape)))
    return np.stack(rows)


def _compile_system(spec, grid, values, operator, frozen):
    compiled = [compile_array(spec.equations[f], operator) for f in spec.fields]
    shape = grid.shape

    def rhs(y):
        b = dict(values)
        b[spec.space] = grid
        for i, f in enumerate(spec.fields):
            b[f] = y[i]
        out = np.stack([np.array(_broadcast(fn(b), shape)) for fn in compiled])
        out[:, frozen] = 0.0
        return out
    return rhs


def build_mol_system(spec, params, half_width=DEFAULT_HALF_WIDTH, points=DEFAULT_POINTS, initial=None):
    """
    Method-of-lines semi-discretization of a PDE problem on [-L, L].

    dx and dxx become second-order central differences; the two end points are
    frozen.

    Returns
    -------
    grid, y0, rhs : grid of points + 1 nodes, initial state (fields, nodes) and
        the right-hand side function of the ODE system.
    """
    if spec.kind != PDE:
        raise ValidationError("method of lines needs a PDE problem, got {}".format(spec.kind))
    if points < MIN_POINTS:
        raise ValidationError("method of lines needs at least {} intervals, got {}".format(MIN_POINTS, points))
    _, values = _bindings(spec, params)
    grid = np.linspace(-half_width, half_width, points + 1)
    h = 2.0 * half_width / points

    def operator(node, inner):
        def stencil(b, cache):
            v = np.array(_broadcast(inner(b, cache), grid.shape))
            out = np.zeros_like(v)
            if isinstance(node, Dx):
                out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
            elif isinstance(node, Dxx):
                out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (h * h)
            else:
                raise UnresolvedOperator("{} has no stencil on a PDE grid".format(node.name))
            return out
        return stencil

    frozen = np.zeros(grid.shape, dtype=bool)
    frozen[0] = frozen[-1] = True
    y0 = _initial_state(spec, grid, values, initial)
    return grid, y0, _compile_system(spec, grid, values, operator, frozen)


def mol_integrate(spec, params, half_width=DEFAULT_HALF_WIDTH, points=DEFAULT_POINTS, t_end=0.1, dt=None,
                  initial=None, saves=DEFAULT_SAVES, verbose=False):
    """
    Method of lines with classical RK4 for a PDE problem.

    Parameters
    ----------
    spec : ProblemSpec
        A PDE problem.
    params : dict
        Every declared parameter -> value.
    half_width : float
        The domain is [-half_width, half_width].
    points : int
        Number of intervals M >= 16; h = 2L/M.
    t_end : float
    dt : float, optional
        Must satisfy dt <= h^2/4, which is also the default; shortened so that
        a whole number of steps reaches ``t_end``.
    initial : dict, optional
        Field -> array of nodal values replacing the problem's initial condition.
    saves : int
        About how many time levels to keep.

    Returns
    -------
    GridSolution : trust region |x| <= L - max(1, L/4).

    Raises
    ------
    StabilityViolation
        dt above h^2/4.
    BlowUp
        Any |value| > 1e10 or a non-finite value.
    """
    start = time.time()
    grid, y0, rhs = build_mol_system(spec, params, half_width, points, initial)
    h = 2.0 * half_width / points
    bound = h * h / 4.0
    if dt is None:
        dt = bound
    if dt > bound * (1 + 1e-12):
        raise StabilityViolation("dt = {:.6g} exceeds h^2/4 = {:.6g} (h = {:.6g})".format(dt, bound, h))
    steps, dt = _steps(float(t_end), float(dt))
    times, states = rk4_integrate(rhs, y0, dt, steps, _save_every(steps, saves), verbose)
    params, _ = _bindings(spec, params)
    solution = GridSolution(kind=PDE, space_name=spec.space, fields=tuple(spec.fields), grid=grid,
                            times=times, values=np.transpose(states, (1, 2, 0)),
                            trust=half_width - max(1.0, half_width / 4.0),
                            scheme={'method': 'method of lines, central differences, RK4', 'h': h, 'dt': dt,
                                    'steps': steps, 'half_width': half_width, 'points': points,
                                    'boundary': 'frozen Dirichlet'},
                            params=params)
    log("method of lines: points={}, h={:.4g}, dt={:.4g}, steps={}, time = {:.3f} s".format(
        points + 1, h, dt, steps, time.time() - start))
    return solution


def _max_shift(spec):
    band = 0
    for e in spec.equations.values():
        stack = [e]
        while stack:
            node = stack.pop()
            if isinstance(node, Shift):
                band = max(band, abs(node.offset))
            stack.extend(node.children)
    return max(band, 1)


def build_lattice_system(spec, params, window=DEFAULT_WINDOW, initial=None):
    """
    Sites n = -W..W of a DDE problem as an ODE system.

    Sites within the largest |shift| of either edge are frozen.

    Returns
    -------
    sites, y0, rhs, band
    """
    if spec.kind != DDE:
        raise ValidationError("lattice integration needs a DDE problem, got {}".format(spec.kind))
    if window < MIN_WINDOW:
        raise ValidationError("lattice window must be at least {}, got {}".format(MIN_WINDOW, window))
    _, values = _bindings(spec, params)
    sites = np.arange(-window, window + 1, dtype=float)
    band = _max_shift(spec)

    def operator(node, inner):
        if not isinstance(node, Shift):
            raise UnresolvedOperator("{} has no meaning on a lattice".format(node.name))
        offset = node.offset

        def shifted(b, cache):
            v = np.array(_broadcast(inner(b, cache), sites.shape))
            return np.roll(v, -offset)
        return shifted

    frozen = np.zeros(sites.shape, dtype=bool)
    frozen[:band] = frozen[-band:] = True
    y0 = _initial_state(spec, sites, values, initial)
    return sites, y0, _compile_system(spec, sites, values, operator, frozen), band


def dde_integrate(spec, params, window=DEFAULT_WINDOW, t_end=0.1, dt=DEFAULT_LATTICE_DT, initial=None,
                  saves=DEFAULT_SAVES, verbose=False):
    """
    Classical RK4 on the 2W + 1 sites of a DDE problem.

    Returns
    -------
    GridSolution : trust region |n| <= W - 2*band, band being the largest |shift|.
    """
    start = time.time()
    sites, y0, rhs, band = build_lattice_system(spec, params, window, initial)
    steps, dt = _steps(float(t_end), float(dt))
    times, states = rk4_integrate(rhs, y0, dt, steps, _save_every(steps, saves), verbose)
    params, _ = _bindings(spec, params)
    solution = GridSolution(kind=DDE, space_name=spec.space, fields=tuple(spec.fields), grid=sites,
                            times=times, values=np.transpose(states, (1, 2, 0)),
                            trust=float(window - 2 * band),
                            scheme={'method': 'lattice RK4', 'dt': dt, 'steps': steps, 'window': window,
                                    'band': band, 'boundary': 'frozen edge sites'},
                            params=params)
    log("lattice: sites={}, dt={:.4g}, steps={}, time = {:.3f} s".format(len(sites), dt, steps,
                                                                         time.time() - start))
    return solution


def integrate(spec, params, t_end, dt=None, verbose=False, **kwargs):
    """Dispatch on the problem kind with the default domain of each."""
    if spec.kind == PDE:
        return mol_integrate(spec, params, t_end=t_end, dt=dt, verbose=verbose, **kwargs)
    return dde_integrate(spec, params, t_end=t_end, dt=DEFAULT_LATTICE_DT if dt is None else dt,
                         verbose=verbose, **kwargs)


def reference_params(spec, overrides=None):
    """Declared parameters at 1 unless overridden; rationals kept exact."""
    params = {p: Fraction(1) for p in spec.parameters}
    for k, v in (overrides or {}).items():
        if k not in params:
            raise ValidationError("unknown parameter override: {}".format(k))
        params[k] = to_fraction(v)
    return params