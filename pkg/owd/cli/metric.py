import traceback
import owd.exceptions
from owd.utility.logging import Logger
from owd.utility.options import add_model_arguments


def parser():
    return {
        'help': 'prints the residue metric eta, the intersection form g (in closed form when the family has one) '
                'and the structure constants c and c* of a model at a point read from a JSON file'
    }


def add_arguments(parser):
    """
    Parse Arguments
    Args:
        parser: (argparse.ArgumentParser)

    """
    add_model_arguments(parser)

    parser.add_argument('--point', action='store', type=str, dest='point', required=True,
                        help='JSON file mapping each chart variable to [re, im]')


def run(**kwargs):
    from owd.frobenius.geometry import critical_points, eta_residue, g_residue, product_data
    from owd.models import catalog
    from owd.models.bundle import RankTwoBundle
    from owd.utility.options import model_parameters
    from owd.utility.utility import Utility
    import time

    try:
        start = time.time()
        bundle = catalog.build(kwargs['model'], model_parameters(kwargs))
        if isinstance(bundle, RankTwoBundle):
            raise owd.exceptions.ParameterError('metric is not defined for the rank-two family {}'.format(
                bundle.family))
        values = Utility.read_point_file(kwargs['point'])
        missing = [n for n in bundle.chart if n not in values]
        if missing:
            raise owd.exceptions.ParameterError('point file lacks {}'.format(', '.join(missing)))
        point = bundle.point({n: values[n] for n in bundle.chart})
        frame = critical_points(bundle, point)
        products = product_data(bundle, point, frame)
        metric = bundle.closed_metric
        if metric is None:
            metric = g_residue(bundle, point, frame).metric
        lines = [Utility.format_array('eta', eta_residue(bundle, point, frame).metric),
                 Utility.format_array('g', metric),
                 Utility.format_array('c', products.structure),
                 Utility.format_array('c_dual', products.require_dual())]
        print('\n'.join(lines))
        end = time.time()
        logger = Logger(kwargs["logfile"])
        logger.write_to_file(args={
            "command": "metric",
            "time": end - start,
            "model": bundle.label
        })
    except owd.exceptions.ParameterError as e:
        message = 'Command: metric\n'
        message += 'Error Message:  {}\n'.format(e)
        raise owd.exceptions.OWDArgumentParseException(message)
    except owd.exceptions.InadmissiblePointError as e:
        message = 'Command: metric\n'
        message += 'Error Message:  inadmissible point, {}\n'.format(e)
        raise owd.exceptions.OWDException(message)
    except:
        message = 'Command: metric\n'
        message += 'Error Message:  {}\n'.format(traceback.format_exc())
        raise owd.exceptions.OWDException(message)
