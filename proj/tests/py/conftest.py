import os
import sys
from pathlib import Path

# The smoke tests import the package staged in the CMake build tree; an
# installed wheel works too and takes precedence on sys.path only if the
# build tree is absent.
_build = os.environ.get("MINIJUDGE_BUILD_DIR")
_candidates = [Path(_build)] if _build else []
_candidates.append(Path(__file__).resolve().parents[2] / "build")
for _root in _candidates:
    _staged = _root / "python"
    if (_staged / "minijudge" / "__init__.py").exists():
        sys.path.insert(0, str(_staged))
        break
