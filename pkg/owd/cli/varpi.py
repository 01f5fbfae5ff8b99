import traceback
import owd.exceptions
from owd.utility.logging import Logger


def parser():
    return {
        'help': 'prints the coefficient varpi(v) that makes the flat-chart A_ell prepotential satisfy open WDVV'
    }


def add_arguments(parser):
    """
    Parse Arguments
    Args:
        parser: (argparse.ArgumentParser)

    """
    parser.add_argument('-l', '--ell', action='store', type=int, dest='ell', required=True,
                        help='rank of the A_ell model')


def run(**kwargs):
    from owd.models import saito
    import time

    try:
        start = time.time()
        if kwargs['ell'] < 1:
            raise owd.exceptions.ParameterError('--ell must be positive, got {}'.format(kwargs['ell']))
        print(saito.format_varpi(kwargs['ell']))
        end = time.time()
        logger = Logger(kwargs["logfile"])
        logger.write_to_file(args={
            "command": "varpi",
            "time": end - start
        })
    except (owd.exceptions.ParameterError, owd.exceptions.TruncationError) as e:
        message = 'Command: varpi\n'
        message += 'Error Message:  {}\n'.format(e)
        raise owd.exceptions.OWDArgumentParseException(message)
    except:
        message = 'Command: varpi\n'
        message += 'Error Message:  {}\n'.format(traceback.format_exc())
        raise owd.exceptions.OWDException(message)
