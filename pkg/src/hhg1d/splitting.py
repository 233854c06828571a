"""
Fourth-order operator-splitting coefficients (Blanes & Moan 2002, scheme
SRKN₆ᵇ, often labelled BM4).

One step of the palindromic composition

    e^{a₁hA} e^{b₁hB} e^{a₂hA} e^{b₂hB} e^{a₃hA} e^{b₃hB} e^{a₄hA}
    e^{b₃hB} e^{a₃hA} e^{b₂hB} e^{a₂hA} e^{b₁hB} e^{a₁hA}

approximates e^{h(A+B)} with local error O(h⁵).  Both engines use it: the
quantum propagator (A = kinetic, B = potential) and the classical flow
(A = drift, B = kick).  For an explicitly time-dependent B the evaluation
time of each B factor advances with the accumulated A coefficients, which
preserves the order of the method.
"""

from __future__ import annotations

import numpy as np

_A1 = 0.0792036964311957
_A2 = 0.353172906049774
_A3 = -0.0420650803577195
_B1 = 0.209515106613362
_B2 = -0.143851773179818
_A4 = 1.0 - 2.0 * (_A1 + _A2 + _A3)
_B3 = 0.5 - (_B1 + _B2)

# 7 drift coefficients interleaved with 6 kick coefficients
DRIFT_COEFFS = np.array([_A1, _A2, _A3, _A4, _A3, _A2, _A1])
KICK_COEFFS = np.array([_B1, _B2, _B3, _B3, _B2, _B1])

# kick i happens at fractional time Σ_{j<=i} a_j into the step
KICK_TIMES = np.cumsum(DRIFT_COEFFS)[:-1]
