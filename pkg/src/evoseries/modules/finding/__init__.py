from evoseries.modules.finding.plan import SamplePlan, build_plan
from evoseries.modules.finding.report import INCONCLUSIVE, SATISFIED, VIOLATED, ClaimReport, FieldCheck, \
    aggregate_status, dumps
from evoseries.modules.finding.claims import FirstTermTable, ScanResult, check_claim, check_dde_claim, \
    check_initial_condition, check_pde_claim, claim_residuals, first_term_agreement, initial_deviations, \
    parameter_scan, scan_grid
from evoseries.modules.finding.known_good import KNOWN_GOOD, known_good, known_good_suite, perturbed_claim
