"""
Polynomial rank-two extension of the A_ell Saito Frobenius manifold over C^2 with fibre coordinates (z, w).
"""
from owd.exceptions import ParameterError
from owd.models.bundle import RankTwoBundle
from owd.models.saito import build_saito_a
from owd.symbolic import expression as ex

PSI_VARIANTS = ('linear', 'cubic')


def build_rank2_a(ell: int, psi: str = 'linear') -> RankTwoBundle:
    """
    Phi = Omega_(A_ell)(x = z), Psi = w lambda(z) (or the alternative Psi = w^3) and the miniversal deformation
    f = z^(ell+1) + w^2 + a_1(v) z^(ell-1) + ... + a_ell(v)
    """
    if psi not in PSI_VARIANTS:
        raise ParameterError('psi must be one of {}, got {}'.format(', '.join(PSI_VARIANTS), psi))
    base = build_saito_a(ell)
    z = ex.var('z')
    w = ex.var('w')
    lam = ex.substitute(base.superpotential, {'x': z})
    phi = ex.substitute(base.prepotential, {'x': z})
    if psi == 'linear':
        psi_expression = ex.mul(w, lam)
    else:
        psi_expression = ex.power(w, 3)
    miniversal = ex.add(lam, ex.power(w, 2))
    return RankTwoBundle(family='rank2-a', params={'ell': ell, 'psi': psi}, base=base, phi=phi, psi=psi_expression,
                         miniversal=miniversal)
