"""Paraxial nonlinear-ultrasound tomography toolkit.

Synthesizes finite-frequency transmission sinograms of a nonlinearity
coefficient, reconstructs it by filtered back-projection through the exact
discrete adjoint, and checks the supporting beam and Westervelt identities.
"""

__version__ = "1.0.0"
__author__ = "Paraxial Tomo Developers"
