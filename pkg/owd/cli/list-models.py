import traceback
import owd.exceptions
from owd.utility.logging import Logger


def parser():
    return {
        'help': 'lists the model families with their parameter schemas, one per line'
    }


def add_arguments(parser):
    """
    Parse Arguments
    Args:
        parser: (argparse.ArgumentParser)

    """
    parser.add_argument('-d', '--describe', action='store_true', dest='describe',
                        help='append a short description of each family')


def run(**kwargs):
    from owd.models import catalog
    import time

    try:
        start = time.time()
        for family in catalog.FAMILIES:
            line = family.describe()
            if kwargs.get('describe') and family.description:
                line += '\t' + family.description
            print(line)
        end = time.time()
        logger = Logger(kwargs["logfile"])
        logger.write_to_file(args={
            "command": "list-models",
            "time": end - start
        })
    except:
        message = 'Command: list-models\n'
        message += 'Error Message:  {}\n'.format(traceback.format_exc())
        raise owd.exceptions.OWDException(message)
