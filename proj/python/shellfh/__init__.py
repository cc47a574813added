"""Filtered hyperinterpolation on spherical shells.

Thin python layer over the compiled core; everything lives in the
extension module.
"""

from ._shellfh import (  # noqa: F401
    AngularFiltered,
    BaselineApproximant,
    CertReport,
    DegreeCaps,
    DesignLibrary,
    FilterPair,
    JacobiBasis,
    NumericalError,
    PreconditionError,
    RadialFiltered,
    RadialRule,
    ShellApproximant,
    ShellPoint,
    SphericalRule,
    SphPoint,
    __version__,
    angular_filtered,
    angular_rule_for,
    assoc_legendre_norm,
    baseline_nonfiltered,
    certify,
    exp_filter,
    f1,
    f2,
    f3,
    fit,
    gauss_jacobi_rule,
    indicator_filter,
    load_design,
    product_rule,
    radial_filtered,
    radial_kernel,
    radial_rule_for,
    sph_harm_batch,
    sph_harm_real,
)
