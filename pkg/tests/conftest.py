import os
import random

import pytest

from rvq.gp import GeneralizedPermutation, is_irreducible


@pytest.fixture(scope="session", autouse=True)
def class_cache(tmp_path_factory):
    path = tmp_path_factory.mktemp("rvq-cache")
    os.environ["RVQ_CACHE_DIR"] = str(path)
    yield path


def random_gp(rng: random.Random, d: int, *, strict=None, convention=False,
              irreducible=False, tries=4000) -> GeneralizedPermutation:
    """Random valid generalized permutation with d letters."""
    letters = [str(i) for i in range(d)]
    for _ in range(tries):
        arr = letters * 2
        rng.shuffle(arr)
        ell = rng.randint(1, 2 * d - 1)
        try:
            gp = GeneralizedPermutation(tuple(arr[:ell]), tuple(arr[ell:]))
        except Exception:
            continue
        if strict is not None and gp.is_strict != strict:
            continue
        if convention and not gp.satisfies_convention():
            continue
        if irreducible and not is_irreducible(gp):
            continue
        return gp
    raise RuntimeError("no sample found for d=%d" % d)
