"""Kernel dispatch: the compiled backend when built, pure Python otherwise.

Set HODT_PURE=1 to force the fallback (the benchmark and the parity
tests import both backends directly).
"""

import os

if os.environ.get('HODT_PURE'):
    from . import _pykern as _impl
else:
    try:
        from . import _ckern as _impl
    except ImportError:
        from . import _pykern as _impl

BACKEND = 'compiled' if _impl.__name__.endswith('_ckern') else 'python'

eisner_decode = _impl.eisner_decode
cle_decode = _impl.cle_decode
viterbi_chain = _impl.viterbi_chain
