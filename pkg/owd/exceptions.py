import sys
import warnings


class OWDException(BaseException):
    return_code = 1
    message = "OWDException found\n"

    def __init__(self, message):
        self.message = message


class OWDArgumentParseException(OWDException):
    return_code = 2


class OWDCheckFailedException(OWDException):
    return_code = 1


class OWDExceptionHandler(object):
    def __call__(self, func, *args, **kwargs):
        try:
            return_code = func(*args, **kwargs) or 0
            if return_code != 0:
                warnings.warn('Please raise exception instead of returning non-zero value')
            return return_code
        except BaseException as e:
            type, exc_val, exc_tb = sys.exc_info()
            return self.handle_exception(e, type, exc_val, exc_tb)

    def handle_exception(self, e, etype, exc_val, exc_tb):
        if isinstance(e, OWDException):
            sys.stderr.write(e.message)
            return e.return_code

        warnings.warn('Please raise OWDException instead of {}'.format(etype))
        sys.stderr.write(OWDException.message)
        return OWDException.return_code


class UnboundVariableError(Exception):
    def __init__(self, variable):
        super(UnboundVariableError, self).__init__('variable {} has no binding'.format(variable))
        self.variable = variable


class NumericDomainError(Exception):
    def __init__(self, kind, detail=''):
        super(NumericDomainError, self).__init__('non-finite value at node {} {}'.format(kind, detail).strip())
        self.kind = kind


class EssentialSingularityError(Exception):
    pass


class WrongLeadingTermError(Exception):
    pass


class TruncationError(Exception):
    pass


class InadmissiblePointError(Exception):
    def __init__(self, guard, detail=''):
        super(InadmissiblePointError, self).__init__('{}: {}'.format(guard, detail) if detail else guard)
        self.guard = guard


class DegenerateCriticalPointError(InadmissiblePointError):
    def __init__(self, detail=''):
        super(DegenerateCriticalPointError, self).__init__('degenerate-critical-point', detail)


class DiscriminantError(InadmissiblePointError):
    def __init__(self, detail=''):
        super(DiscriminantError, self).__init__('discriminant', detail)


class NonConvergenceError(Exception):
    pass


class QuadratureError(Exception):
    pass


class EndpointMismatchError(Exception):
    pass


class ParameterError(Exception):
    pass


class UnknownFamilyError(ParameterError):
    pass


class UnknownCheckError(ParameterError):
    pass


def owd_exception_handler(func, *args, **kwargs):
    exception_handler = OWDExceptionHandler()
    return_code = exception_handler(func, *args, **kwargs)
    return return_code
