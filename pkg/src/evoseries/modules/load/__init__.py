from evoseries.modules.load.parser import parse_expression, tokenize
from evoseries.modules.load.problem import Claim, DDE, PDE, ProblemSpec, parse_problem, read_problem_file, \
    validate_problem
