import sys
import traceback
import owd.exceptions
from owd.utility.logging import Logger
from owd.utility.options import add_run_arguments


def parser():
    return {
        'help': 'integrates twisted periods lambda^z dx between adjacent real zeros of lambda at real sample points '
                'and reports the Gauss-Manin residual of the deformed dual connection and the quadrature stability'
    }


def add_arguments(parser):
    """
    Parse Arguments
    Args:
        parser: (argparse.ArgumentParser)

    """
    add_run_arguments(parser, default_samples=3)

    parser.add_argument('-z', '--zexp', action='append', type=float, dest='zexp', default=[],
                        help='twist exponent z with Re z > 2, repeatable. Default is 2.5 and 3')


def run(**kwargs):
    from owd.verification import runner
    from owd.utility.options import run_config
    import time

    try:
        start = time.time()
        overrides = {'exponents': tuple(kwargs['zexp'])} if kwargs.get('zexp') else {}
        config = run_config(kwargs, **overrides)
        report = runner.run(config, kind=runner.PERIOD)
        report.write(config.out, config.table, stream=sys.stdout)
        end = time.time()
        logger = Logger(kwargs["logfile"])
        logger.write_to_file(args={
            "command": "periods",
            "time": end - start,
            "model": report.model,
            "failed": report.failed()
        })
    except owd.exceptions.ParameterError as e:
        message = 'Command: periods\n'
        message += 'Error Message:  {}\n'.format(e)
        raise owd.exceptions.OWDArgumentParseException(message)
    except:
        message = 'Command: periods\n'
        message += 'Error Message:  {}\n'.format(traceback.format_exc())
        raise owd.exceptions.OWDException(message)

    if not report.passed():
        raise owd.exceptions.OWDCheckFailedException(
            'Command: periods\nFailed checks: {}\n'.format(', '.join(report.failed())))
