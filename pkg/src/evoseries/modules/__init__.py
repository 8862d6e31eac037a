from evoseries.modules import utils
from evoseries.modules import expr
from evoseries.modules import load
from evoseries.modules import series
from evoseries.modules import finding
from evoseries.modules import numeric
