import json
from fractions import Fraction

import mpmath
import pytest

from evoseries.modules.expr.evaluate import evaluate, to_mpf
from evoseries.modules.expr.zero import ProvenNonZero, ProvenZero, Unknown
from evoseries.modules.finding.claims import check_claim, check_dde_claim, check_initial_condition, \
    check_pde_claim, claim_residuals, first_term_agreement, initial_deviations, parameter_scan, scan_grid
from evoseries.modules.finding.known_good import KNOWN_GOOD, known_good_suite, perturbed_claim
from evoseries.modules.finding.plan import PERTURBATION_COUNT, build_plan
from evoseries.modules.finding.report import INCONCLUSIVE, SATISFIED, VIOLATED, aggregate_status
from evoseries.modules.load.parser import parse_expression as P
from evoseries.modules.utils.errors import ValidationError
from evoseries.modules.utils.util import DEFAULT_SEED

from conftest import single_field

KDV_RHS = "(1 + alpha*u + beta*u^2)*(shift(u, 1) - shift(u, -1))"


def exact_wave_residuals(x, t, k):
    """dt - RHS of both fields for the z = x + x*t wave, by numerical differentiation."""
    with mpmath.workdps(40):
        x, t, k = to_mpf(x), to_mpf(t), to_mpf(k)

        def U(x, t):
            z = x + x * t
            return mpmath.exp(k * z) / (1 + mpmath.exp(k * z / 2)) ** 2

        def V(x, t):
            z = x + x * t
            return 1 / (1 + mpmath.exp(k * z / 2))

        u, v = U(x, t), V(x, t)
        ru = mpmath.diff(U, (x, t), (0, 1)) - (u * (1 - u - v) + mpmath.diff(U, (x, t), (2, 0)))
        rv = mpmath.diff(V, (x, t), (0, 1)) - (mpmath.diff(V, (x, t), (2, 0)) - u * v)
        return {'u': ru, 'v': rv}


def test_known_good_suite():
    suite = known_good_suite()
    assert len(suite) == len(KNOWN_GOOD) == 5
    for spec, claim, perturbed in suite:
        assert check_claim(spec, claim).status == SATISFIED, spec.name
        assert check_claim(spec, perturbed).status == VIOLATED, spec.name


def test_satisfied_needs_proofs(heat):
    report = check_pde_claim(heat, 'exact')
    assert report.status == SATISFIED
    assert all(isinstance(c.verdict, ProvenZero) for c in report.equations + report.ic)
    assert report.witnesses() == []


def test_forcing_term_is_violated():
    spec = single_field('PDE', 'dxx(u) + u', 'exp(x)', claims="[claim.heat]\nu = exp(x + t)\n")
    report = check_pde_claim(spec, 'heat')
    assert report.status == VIOLATED
    check = report.equations[0]
    assert isinstance(check.verdict, ProvenNonZero)
    assert "exp" in check.expression
    assert isinstance(report.ic[0].verdict, ProvenZero)


def test_exact_wave_xt_is_violated(reaction_diffusion):
    report = check_pde_claim(reaction_diffusion, 'exact_wave_xt')
    assert report.status == VIOLATED
    assert any(isinstance(c.verdict, ProvenNonZero) for c in report.equations)


def test_exact_wave_ct_misses_the_initial_profile(reaction_diffusion):
    report = check_pde_claim(reaction_diffusion, 'exact_wave_ct')
    assert report.status == VIOLATED
    ic = {c.field: c for c in report.ic}
    assert isinstance(ic['u'].verdict, ProvenNonZero)


def test_witnesses_are_reproducible(reaction_diffusion):
    report = check_claim(reaction_diffusion, 'exact_wave_xt')
    witnesses = [c for c in report.equations if isinstance(c.verdict, ProvenNonZero)]
    assert witnesses
    for check in witnesses:
        w = check.verdict.witness
        expected = abs(exact_wave_residuals(w['x'], w['t'], w['k'])[check.field])
        assert float(check.verdict.magnitude) == pytest.approx(float(expected), rel=1e-9)


def test_residual_at_reference_point(reaction_diffusion):
    residuals = claim_residuals(reaction_diffusion, reaction_diffusion.claim('exact_wave_xt'))
    expected = exact_wave_residuals(1, Fraction(1, 2), 1)
    for f in ('u', 'v'):
        value = evaluate(residuals[f], {'x': 1, 't': Fraction(1, 2), 'k': 1})
        assert float(value) == pytest.approx(float(expected[f]), rel=1e-12)


def test_initial_condition_mismatch(reaction_diffusion):
    claim = reaction_diffusion.claim('source_wave')
    checks = {c.field: c for c in check_initial_condition(reaction_diffusion, claim)}
    assert isinstance(checks['v'].verdict, ProvenNonZero)
    deviation = initial_deviations(reaction_diffusion, claim)['v']
    value = evaluate(deviation, {'x': 2, 'k': 1, 'c': 1})
    e = mpmath.e
    assert float(value) == pytest.approx(float(1 / (1 + e) - 1 / (1 + 1 / e)), rel=1e-12)


def test_matching_initial_condition_is_proven(heat):
    checks = check_initial_condition(heat, heat.claim('shifted_speed'))
    assert all(isinstance(c.verdict, ProvenZero) for c in checks)


def test_constant_lattice_claim_is_satisfied():
    spec = single_field('DDE', KDV_RHS, 'a0', claims="[claim.flat]\nu = a0\n", parameters='alpha, beta, a0')
    report = check_dde_claim(spec, 'flat')
    assert report.status == SATISFIED


def test_frozen_linear_lattice_is_violated(linear_lattice):
    report = check_dde_claim(linear_lattice, 'frozen')
    assert report.status == VIOLATED
    assert float(report.equations[0].verdict.magnitude) == pytest.approx(2.0)
    assert check_dde_claim(linear_lattice, 'drift').status == SATISFIED


def test_kdv_claim_at_defaults(kdv_lattice):
    report = check_dde_claim(kdv_lattice, 'tanh_soliton')
    assert report.status == VIOLATED
    assert isinstance(report.ic[0].verdict, ProvenZero)


def test_sampling_alone_never_satisfies(kdv_lattice):
    # beta = alpha^2/4 makes the claim hold numerically but not symbolically in beta
    claim = kdv_lattice.claim('tanh_soliton')
    plan = build_plan(kdv_lattice, claim, params={'alpha': 2, 'beta': 1}, perturbations=0)
    report = check_dde_claim(kdv_lattice, claim, plan)
    assert report.status == INCONCLUSIVE
    assert isinstance(report.equations[0].verdict, Unknown)


def test_wrong_kind(heat, linear_lattice):
    with pytest.raises(ValidationError):
        check_dde_claim(heat, 'exact')
    with pytest.raises(ValidationError):
        check_pde_claim(linear_lattice, 'drift')
    with pytest.raises(ValidationError):
        check_claim(heat, 'nonexistent')


def test_poles_are_skipped_and_recorded():
    spec = single_field('PDE', 'u^2', '1/x', claims="[claim.wrong]\nu = 1/(x + t)\n")
    report = check_claim(spec, 'wrong')
    check = report.equations[0]
    assert isinstance(check.verdict, ProvenNonZero)
    assert {'x': Fraction(-1), 't': Fraction(1)} in check.poles
    assert check.samples == len(report.plan.bindings())
    assert report.to_dict()['equations'][0]['poles']


def test_aggregate_status():
    assert aggregate_status([]) == INCONCLUSIVE


# sample plans

def test_plan_defaults(reaction_diffusion):
    claim = reaction_diffusion.claim('exact_wave_ct')
    plan = build_plan(reaction_diffusion, claim)
    assert plan.base == {'k': 1, 'c': 1}
    assert len(plan.perturbations) == PERTURBATION_COUNT
    assert plan.seed == DEFAULT_SEED
    first = plan.bindings()[0]
    assert first == {'k': 1, 'c': 1, 'x': -2, 't': Fraction(1, 10)}
    inventory = plan.inventory()
    assert inventory['residual_samples'] == 9 * 6 * 3
    assert inventory['ic_samples'] == 9 * 6
    for p in plan.perturbations:
        assert all(abs(p[name] - 1) <= Fraction(1, 2) for name in ('k', 'c'))


def test_plan_is_seeded(reaction_diffusion):
    a = build_plan(reaction_diffusion, seed=7)
    b = build_plan(reaction_diffusion, seed=7)
    c = build_plan(reaction_diffusion, seed=8)
    assert a.perturbations == b.perturbations
    assert a.perturbations != c.perturbations


def test_plan_overrides(reaction_diffusion, linear_lattice):
    plan = build_plan(reaction_diffusion, params={'k': '1/2'})
    assert plan.base == {'k': Fraction(1, 2)}
    with pytest.raises(ValidationError):
        build_plan(reaction_diffusion, params={'q': 1})
    lattice = build_plan(linear_lattice)
    assert lattice.space == tuple(Fraction(n) for n in range(-3, 4))
    assert lattice.perturbations == ()
    pinned = plan.with_base('k', 2)
    assert pinned.base == {'k': 2} and pinned.perturbations == ()


# reports

def test_report_is_deterministic(reaction_diffusion):
    first = check_claim(reaction_diffusion, 'exact_wave_xt').to_json()
    second = check_claim(reaction_diffusion, 'exact_wave_xt').to_json()
    assert first == second
    doc = json.loads(first)
    for key in ('claim', 'status', 'equations', 'ic', 'samples', 'seed', 'precision', 'source_hash', 'version'):
        assert key in doc
    assert doc['status'] == VIOLATED


def test_report_text(heat):
    text = check_claim(heat, 'exact').to_text()
    assert text.splitlines()[0] == "claim exact of heat (PDE): Satisfied"
    assert "residual u: ProvenZero" in text


# parameter scans

def test_scan_grid():
    assert scan_grid(-2, 2, 9) == [Fraction(n, 2) for n in range(-4, 5)]
    assert scan_grid(1, 1, 1) == [1]
    with pytest.raises(ValidationError):
        scan_grid(0, 1, 0)


def test_source_wave_scan(reaction_diffusion):
    result = parameter_scan(reaction_diffusion, 'source_wave', 'k', scan_grid(-2, 2, 9))
    assert list(result.frame.columns) == ['k', 'ic_max_u', 'ic_max_v', 'residual_max']
    assert len(result.frame) == 9
    assert result.zeros['ic_max_v'] == [-1]
    assert result.zeros['ic_max_u'] == [0]
    assert result.minima['ic_max_v'] == -1
    assert 'residual_max' not in result.zeros
    doc = result.to_dict()
    assert doc['near_zero']['ic_max_v'] == ['-1']


def test_heat_speed_scan(heat):
    result = parameter_scan(heat, 'shifted_speed', 'c', scan_grid(0, 2, 5))
    assert result.zeros['residual_max'] == [1]
    # the claim's initial profile does not depend on c
    assert result.zeros['ic_max_u'] == scan_grid(0, 2, 5)
    coarse = parameter_scan(heat, 'shifted_speed', 'c', scan_grid(0, 2, 4))
    assert coarse.brackets['residual_u'] == [(Fraction(2, 3), Fraction(4, 3))]
    assert "changes sign" in coarse.to_text()


def test_scan_needs_a_declared_symbol(heat):
    with pytest.raises(ValidationError):
        parameter_scan(heat, 'exact', 'c', [0, 1])
    with pytest.raises(ValidationError):
        parameter_scan(heat, 'shifted_speed', 'c', [])


# first Taylor term against the claim

def test_first_term_at_defaults(kdv_lattice):
    claim = kdv_lattice.claim('tanh_soliton')
    table = first_term_agreement(kdv_lattice, claim, build_plan(kdv_lattice, claim, perturbations=0))
    summary = table.summary()
    assert summary['rows'] == 7
    # only n = -1 passes, where tanh(k*n + c) vanishes and both sides are 0
    assert summary['residual_passing'] == summary['trivial_passing'] == summary['agreeing'] == 1
    assert table.passing.iloc[0]['bindings']['n'] == '-1'
    assert "1 of the passing rows hold trivially" in table.to_text()


def test_first_term_over_the_default_plan(kdv_lattice):
    claim = kdv_lattice.claim('tanh_soliton')
    table = first_term_agreement(kdv_lattice, claim)
    summary = table.summary()
    assert summary['rows'] == 20
    assert summary['agreeing'] == summary['residual_passing']
    assert len(table.to_dict()['rows']) == 20


def test_first_term_where_the_claim_holds(kdv_lattice):
    claim = kdv_lattice.claim('tanh_soliton')
    plan = build_plan(kdv_lattice, claim, params={'alpha': 2, 'beta': 1}, perturbations=0)
    table = first_term_agreement(kdv_lattice, claim, plan)
    summary = table.summary()
    assert summary['residual_passing'] == summary['rows'] > 0
    assert summary['agreeing'] == summary['residual_passing']


def test_perturbed_claim_scales_time(heat):
    claim = perturbed_claim(heat.claim('exact'), Fraction(1, 2))
    assert claim.solutions['u'] == P("exp(x + 3*t/2)")
    assert claim.name == 'exact_perturbed'
