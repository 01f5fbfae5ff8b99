import sys
import traceback
import owd.exceptions
from owd.utility.logging import Logger
from owd.utility.options import add_run_arguments


def parser():
    return {
        'help': 'evaluates the identities of a model (open and closed WDVV, K_ab, homogeneity, eventual identity, '
                'extended products) at seeded sample points and writes a JSON report'
    }


def add_arguments(parser):
    """
    Parse Arguments
    Args:
        parser: (argparse.ArgumentParser)

    """
    add_run_arguments(parser)


def run(**kwargs):
    from owd.verification import runner
    from owd.utility.options import run_config
    import time

    try:
        start = time.time()
        config = run_config(kwargs)
        report = runner.run(config, kind=runner.SAMPLE)
        report.write(config.out, config.table, stream=sys.stdout)
        end = time.time()
        logger = Logger(kwargs["logfile"])
        logger.write_to_file(args={
            "command": "verify",
            "time": end - start,
            "model": report.model,
            "failed": report.failed()
        })
    except owd.exceptions.ParameterError as e:
        message = 'Command: verify\n'
        message += 'Error Message:  {}\n'.format(e)
        raise owd.exceptions.OWDArgumentParseException(message)
    except:
        message = 'Command: verify\n'
        message += 'Error Message:  {}\n'.format(traceback.format_exc())
        raise owd.exceptions.OWDException(message)

    if not report.passed():
        raise owd.exceptions.OWDCheckFailedException(
            'Command: verify\nFailed checks: {}\n'.format(', '.join(report.failed())))
