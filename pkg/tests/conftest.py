import sys

import pytest

from kpnmc.bdd import _pykernel

try:
    from kpnmc.bdd import _ckernel
except ImportError:
    _ckernel = None

# The pure-Python kernel raises the limit on demand; do it once up front so
# hypothesis does not see it change mid-test.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))

KERNELS = [_pykernel] + ([_ckernel] if _ckernel is not None else [])


@pytest.fixture(params=KERNELS, ids=lambda k: k.BACKEND)
def kernel(request):
    """Each available kernel module in turn."""
    return request.param
