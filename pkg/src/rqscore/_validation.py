from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .grounding import RegionAtlas, load_atlas
from .lexical import Granularity
from .lexicon import Lexicon, load_lexicon


def check_reports(X, name="X") -> List[str]:
    """Coerce a 1-d collection of report texts (list, array, Series) to a list of str."""
    if isinstance(X, str):
        raise TypeError(f"{name} must be a sequence of report texts, not a single string")
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    out = []
    for i, x in enumerate(arr):
        if x is None or (isinstance(x, float) and np.isnan(x)):
            out.append("")
        elif not isinstance(x, str):
            raise TypeError(f"{name}[{i}] is {type(x).__name__}, expected str")
        else:
            out.append(x)
    return out


def check_consistent_length(*arrays: Sequence) -> None:
    lengths = {len(a) for a in arrays if a is not None}
    if len(lengths) > 1:
        raise ValueError(f"inputs have inconsistent lengths: {sorted(lengths)}")


def check_level(level) -> Granularity:
    try:
        return Granularity(level)
    except ValueError:
        raise ValueError(f"level must be one of {[g.value for g in Granularity]}, got {level!r}") from None


def check_window(window) -> int:
    if int(window) != window or window < 1:
        raise ValueError(f"negation_window must be a positive integer, got {window!r}")
    return int(window)


def resolve_lexicon(lexicon) -> Lexicon:
    if isinstance(lexicon, Lexicon):
        return lexicon
    if lexicon is None:
        return load_lexicon(None)
    if isinstance(lexicon, (str, Path)):
        return load_lexicon(lexicon)
    raise TypeError(f"lexicon must be a Lexicon, a path or None, got {type(lexicon).__name__}")


def resolve_atlas(atlas, lexicon: Optional[Lexicon] = None) -> RegionAtlas:
    if isinstance(atlas, RegionAtlas):
        return atlas
    if isinstance(atlas, (str, Path)):
        return load_atlas(atlas, lexicon.catalog if lexicon is not None else None)
    raise TypeError(f"atlas must be a RegionAtlas or a path, got {type(atlas).__name__}")
