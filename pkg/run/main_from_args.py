import sys
import time

from evoseries.cli import EXIT_ERROR, run_config, write_outputs
from evoseries.modules.args.args_handler import load_args
from evoseries.modules.utils.errors import EvoSeriesError
from evoseries.modules.utils.util import log

if __name__ == '__main__':
    t = time.time()
    config = load_args(sys.argv[1])
    if len(sys.argv) > 2:
        config.problem = sys.argv[2]
    log(config)
    try:
        code, doc, text = run_config(config)
    except (EvoSeriesError, OSError) as err:
        log("error: {}: {}".format(type(err).__name__, err))
        sys.exit(EXIT_ERROR)
    write_outputs(config, doc, text)
    log("Total run time = {:.3f} s.".format(time.time() - t))
    sys.exit(code)
