"""Select the word kernel backend.

The compiled extension is used when it imports; set
``GROWTHCERTIFY_PURE_PYTHON=1`` to force the pure-Python kernels.
"""
import os

BACKEND = "python"

if not os.environ.get("GROWTHCERTIFY_PURE_PYTHON"):
    try:
        from ._ckernel import (  # noqa: F401
            concat_reduce,
            expand_shell,
            free_reduce,
            invert_letters,
            substitute,
        )

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._pykernel import (  # noqa: F401
        concat_reduce,
        expand_shell,
        free_reduce,
        invert_letters,
        substitute,
    )
