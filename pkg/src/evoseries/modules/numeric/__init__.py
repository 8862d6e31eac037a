from evoseries.modules.numeric.grid import GridSolution
from evoseries.modules.numeric.integrators import BLOW_UP_LIMIT, DEFAULT_HALF_WIDTH, DEFAULT_LATTICE_DT, \
    DEFAULT_POINTS, DEFAULT_WINDOW, build_lattice_system, build_mol_system, dde_integrate, integrate, \
    mol_integrate, reference_params, rk4_integrate
from evoseries.modules.numeric.window import ValidityWindow, validity_window
