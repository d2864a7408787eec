"""Named fixtures: base modules, the Cuntz family, resolutions, and the
expected product/tensor/Tor tables used as golden data.

The Cuntz module for parameter k depends on the congruence class of k
modulo 4.  Tables are written for generic parameters and instantiated
with the conventions Z_1 = 0 (generators with invariant 1 vanish) and
entries reduced modulo the target invariants.  Every instantiated module
must pass the relation suite, which doubles as a transcription checksum.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import Optional

from .crt_core import (
    CRTModule,
    OP_NAMES,
    OP_SPECS,
    PARTS,
    make_module,
    module_from_json,
    module_to_json,
    verify_relations,
    zero_module,
)
from .free_crt import (
    Element,
    FreeMorphism,
    MonogenicKind,
    act,
    add_elements,
    free_module,
    monogenic,
    realize_morphism,
    scale_element,
    table_group,
    table_matrix,
)
from .tensor import FreeResolution, restrict_to_kernels

# Anomalies in the printed tables, kept as metadata rather than silently
# normalized.  The c_3 entry of the product table for k = l = 0 mod 4 prints
# a symbol d defined nowhere; it is read as g, the value forced by the
# relation c = zeta.eps at degree 3.
FIXTURE_FLAGS = {
    "product_0mod4.c_3": "printed d/2 read as g/2 (forced by c = zeta.eps)",
}


def _instantiate(groups_listed: dict, ops_listed: dict) -> CRTModule:
    """Build a module from listed invariants and raw table entries."""
    groups = {p: [table_group(invs) for invs in groups_listed[p]] for p in PARTS}
    mats = {}
    for name in OP_NAMES:
        src, tgt, shift = OP_SPECS[name]
        fam = []
        for n in range(8):
            dom = groups_listed[src][n]
            cod = groups_listed[tgt][(n + shift) % 8]
            fam.append(table_matrix(ops_listed[name][n], dom, cod))
        mats[name] = fam
    M = make_module(groups, mats)
    rep = verify_relations(M)
    if not rep.ok():
        raise ValueError(f"table instantiation fails relations: {rep}")
    return M


def _per4(a, b, c, d):
    return [a, b, c, d, a, b, c, d]


def _per2(a, b):
    return [a, b] * 4


# ---------------------------------------------------------------------------
# The Cuntz family (k >= 1)
# ---------------------------------------------------------------------------


def cuntz_module(k: int) -> CRTModule:
    """United K-theory of the real Cuntz algebra with parameter k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    Zk = [k]
    if k % 2 == 1:
        groups = {
            "O": [Zk, [], [], [], Zk, [], [], []],
            "U": _per2(Zk, []),
            "T": _per4(Zk, [], [], Zk),
        }
        ops = {
            "c":     [1, 0, 0, 0, 2, 0, 0, 0],
            "r":     [2, 0, 0, 0, 1, 0, 0, 0],
            "eps":   [1, 0, 0, 0, 2, 0, 0, 0],
            "zeta":  [1, 0, 0, 0, 1, 0, 0, 0],
            "psiU":  _per4(1, 0, -1, 0),
            "psiT":  _per4(1, 0, 0, -1),
            "gamma": [1, 0, 0, 0, 1, 0, 0, 0],
            "tau":   [0, 0, 0, 1, 0, 0, 0, 2],
        }
    elif k % 4 == 2:
        groups = {
            "O": [Zk, [2], [4], [2], Zk, [], [], []],
            "U": _per2(Zk, []),
            "T": _per4(Zk, [2], [2], Zk),
        }
        ops = {
            "c":     [1, 0, k // 2, 0, 2, 0, 0, 0],
            "r":     [2, 0, 2, 0, 1, 0, 0, 0],
            "eps":   [1, 1, 1, k // 2, 2, 0, 0, 0],
            "zeta":  _per4(1, 0, k // 2, 0),
            "psiU":  _per4(1, 0, -1, 0),
            "psiT":  _per4(1, 1, 1, -1),
            "gamma": _per4(1, 0, 1, 0),
            "tau":   [1, 2, 1, 1, 0, 0, 0, 2],
        }
    else:
        groups = {
            "O": [Zk, [2], [2, 2], [2], Zk, [], [], []],
            "U": _per2(Zk, []),
            "T": _per4(Zk, [2], [2], Zk),
        }
        ops = {
            "c":     [1, 0, [[0, k // 2]], 0, 2, 0, 0, 0],
            "r":     [2, 0, [[1], [0]], 0, 1, 0, 0, 0],
            "eps":   [1, 1, [[0, 1]], k // 2, 2, 0, 0, 0],
            "zeta":  _per4(1, 0, k // 2, 0),
            "psiU":  _per4(1, 0, -1, 0),
            "psiT":  _per4(1, 1, 1, -1),
            "gamma": _per4(1, 0, 1, 0),
            "tau":   [1, [[1], [0]], 1, 1, 0, 0, 0, 2],
        }
    return _instantiate(groups, ops)


def cuntz_resolution(k: int) -> FreeResolution:
    """A length-one free resolution of the Cuntz module.

    Odd k: multiplication by k on the real monogenic module.  Even k: the
    complex monogenic module maps onto the kernel of the two-generator
    surjection; for k = 0 mod 4 the generator image is fixed directly (the
    first coordinate carries a k/2 multiplier, forced by exactness), and
    for k = 2 mod 4 the image is found by the kernel-matching search and
    validated, not assumed.
    """
    target = cuntz_module(k)
    if k % 2 == 1:
        F = monogenic("R", 0)
        gen = F.generator(0)
        mu1 = FreeMorphism(F, F, [scale_element(gen, k)])
        mu0 = realize_morphism(F, target, [Element("O", 0, (1,) if k > 1 else ())])
        return FreeResolution(F, mu1, F, target, mu0)

    F0 = free_module([MonogenicKind("R", 0), MonogenicKind("R", 2)])
    x0 = Element("O", 0, (1,))
    x2 = Element("O", 2, (1,) if k % 4 == 2 else (0, 1))
    mu0 = realize_morphism(F0, target, [x0, x2])
    F1 = monogenic("C", 0)

    def attempt(y: Element) -> Optional[FreeResolution]:
        try:
            mu1 = FreeMorphism(F1, F0, [y])
            return FreeResolution(F1, mu1, F0, target, mu0)
        except ValueError:
            return None

    if k % 4 == 0:
        b0 = F0.generator(0)
        b2 = F0.generator(1)
        y = add_elements(F0.realized,
                         scale_element(act(F0.realized, ["c"], b0), k // 2),
                         act(F0.realized, ["betaU_inv", "c"], b2))
        res = attempt(y)
        if res is None:
            raise ValueError(f"resolution for k={k} failed exactness")
        return res

    # k = 2 mod 4: search the kernel of mu0 for a complex generator.
    ker_mod, incl = restrict_to_kernels(F0.realized, mu0)
    from .crt_core import is_free as _is_free
    if not _is_free(ker_mod):
        raise ValueError(f"kernel of mu0 is not free for k={k}")
    K = ker_mod.group("U", 0)
    emb = incl[("U", 0)]
    for coeffs in _small_vectors(K.ngens, 3):
        y = Element("U", 0, emb.apply(K.reduce(coeffs)))
        res = attempt(y)
        if res is not None:
            return res
    raise ValueError(f"no free generator found in ker(mu0) for k={k}; "
                     f"kernel U-part {K}")


def _small_vectors(n: int, bound: int):
    import itertools
    rng = sorted(range(-bound, bound + 1), key=abs)
    yield from itertools.product(rng, repeat=n)


# ---------------------------------------------------------------------------
# Expected product / tensor / Tor tables
# ---------------------------------------------------------------------------


def _params(k: int, l: int) -> dict:
    g = gcd(k, l)
    out = {"k": k, "l": l, "g": g}
    if k % 2 == 0 and l % 2 == 0:
        out["kp"] = 0 if (k // 2) % g == 0 else 1
        out["lp"] = 0 if (l // 2) % g == 0 else 1
    return out


def expected_product(k: int, l: int) -> CRTModule:
    """The module printed for the product, by congruence case of (k, l)."""
    if k % 2 == 1 or l % 2 == 1:
        return _product_odd(gcd(k, l))
    if k % 4 == 0 and l % 4 == 2:
        k, l = l, k
    if k % 4 == 2 and l % 4 == 2:
        return _product_two_two(gcd(k, l))
    if k % 4 == 2 and l % 4 == 0:
        return _product_two_zero(gcd(k, l))
    return _product_zero_zero(k, l)


def expected_tensor(k: int, l: int) -> CRTModule:
    """Tensor table where the source prints one (k odd, or both 0 mod 4)."""
    if k % 2 == 1 or l % 2 == 1:
        return _tensor_odd(gcd(k, l))
    if k % 4 == 0 and l % 4 == 0:
        return _tensor_zero_zero(k, l)
    raise ValueError(f"no printed tensor table for (k, l) = ({k}, {l})")


def expected_tor(k: int, l: int) -> CRTModule:
    if k % 2 == 1 or l % 2 == 1:
        # same groups and operations as the tensor in the odd case
        return _tensor_odd(gcd(k, l))
    if k % 4 == 0 and l % 4 == 0:
        return _tor_zero_zero(gcd(k, l))
    raise ValueError(f"no printed Tor table for (k, l) = ({k}, {l})")


def _product_odd(g: int) -> CRTModule:
    Zg = [g]
    groups = {
        "O": [Zg, Zg, [], [], Zg, Zg, [], []],
        "U": [Zg] * 8,
        "T": _per4([g, g], Zg, [], Zg),
    }
    ops = {
        "c":     [1, 1, 0, 0, 2, 2, 0, 0],
        "r":     [2, 2, 0, 0, 1, 1, 0, 0],
        "eps":   [[[1], [0]], 1, 0, 0, [[2], [0]], 2, 0, 0],
        "zeta":  _per4([[1, 0]], 1, 0, 0),
        "psiU":  _per4(1, 1, -1, -1),
        "psiT":  _per4([[1, 0], [0, -1]], 1, 0, -1),
        "gamma": _per4(1, [[0], [1]], 0, 0),
        "tau":   [[[0, 2]], 0, 0, 1, [[0, 1]], 0, 0, 2],
    }
    return _instantiate(groups, ops)


def _tensor_odd(g: int) -> CRTModule:
    Zg = [g]
    groups = {
        "O": [Zg, [], [], [], Zg, [], [], []],
        "U": _per2(Zg, []),
        "T": _per4(Zg, [], [], Zg),
    }
    ops = {
        "c":     [1, 0, 0, 0, 2, 0, 0, 0],
        "r":     [2, 0, 0, 0, 1, 0, 0, 0],
        "eps":   [1, 0, 0, 0, 2, 0, 0, 0],
        "zeta":  [1, 0, 0, 0, 1, 0, 0, 0],
        "psiU":  _per4(1, 0, -1, 0),
        "psiT":  _per4(1, 0, 0, -1),
        "gamma": [1, 0, 0, 0, 1, 0, 0, 0],
        "tau":   [0, 0, 0, 1, 0, 0, 0, 2],
    }
    return _instantiate(groups, ops)


def _product_two_two(g: int) -> CRTModule:
    h = g // 2
    groups = {
        "O": [[g], [2 * g], [2, 2], [2, 2], [2 * g], [g], [], []],
        "U": [[g]] * 8,
        "T": _per4([g, g], [2 * g], [2, 2], [2 * g]),
    }
    ops = {
        "c":     [1, 1, [[h, h]], 0, 1, 2, 0, 0],
        "r":     [2, 2, 0, [[1], [1]], 2, 1, 0, 0],
        "eps":   [[[0], [1]], 1, [[1, 0], [0, 1]], [[g, g]], [[h], [h + 1]], 2, 0, 0],
        "zeta":  _per4([[h, 1]], 1, [[h, h]], h),
        "psiU":  _per4(1, 1, -1, -1),
        "psiT":  _per4([[-1, 0], [0, 1]], 1, [[1, 0], [0, 1]], -1),
        "gamma": _per4(2, [[1], [h]], g, [[1], [1]]),
        "tau":   [[[g + 2, g]], [[1], [1]], [[1, 0], [0, 1]], 1, [[1, 0]], 0, 0, 1],
    }
    return _instantiate(groups, ops)


def _product_zero_zero(k: int, l: int) -> CRTModule:
    g = gcd(k, l)
    p = _params(k, l)
    kp, lp = p["kp"], p["lp"]
    h = g // 2
    k2, l2 = k // 2, l // 2
    groups = {
        "O": [[g], [2, g], [2, 2, 2], [2, 2, 2], [2, g], [g], [], []],
        "U": [[g]] * 8,
        "T": _per4([g, g], [2, g], [2, 2], [2, g]),
    }
    # The printed c_3 entry contains an undefined symbol d; it is read as g
    # (the only in-scope parameter, and the value forced by c = zeta.eps).
    ops = {
        "c":     [1, [[0, 1]], [[k2, 0, l2]], [[0, 0, h]], [[0, 2]], 2, 0, 0],
        "r":     [2, [[0], [2]], [[0], [1], [0]], [[lp], [kp], [0]], [[0], [1]], 1, 0, 0],
        "eps":   [[[0], [1]], [[1, 0], [0, 1]], [[1, 0, 0], [0, 0, 1]],
                  [[0, 0, 1], [k2, l2, 0]], [[h, 0], [0, 2]], [[0], [2]], 0, 0],
        "zeta":  _per4([[0, 1]], [[0, 1]], [[k2, l2]], [[h, 0]]),
        "psiU":  _per4(1, 1, -1, -1),
        "psiT":  _per4([[-1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, -1]]),
        "gamma": _per4([[0], [1]], [[1], [0]], [[1], [0]], [[lp], [kp]]),
        "tau":   [[[0, 1], [2, 0]], [[0, lp], [1, 0], [0, kp]],
                  [[1, 0], [0, 1], [0, 0]], [[1, 0], [0, 1]], [[1, 0]], 0, 0, [[0, 2]]],
    }
    return _instantiate(groups, ops)


def _product_two_zero(g: int) -> CRTModule:
    h = g // 2
    groups = {
        "O": [[g], [2, g], [4, 2], [2, 4], [2, g], [g], [], []],
        "U": [[g]] * 8,
        "T": _per4([g, g], [2, g], [2, 2], [2, g]),
    }
    ops = {
        "c":     [1, [[0, 1]], [[h, 0]], [[0, h]], [[0, 2]], 2, 0, 0],
        "r":     [2, [[0], [2]], [[2], [0]], [[0], [2]], [[0], [1]], 1, 0, 0],
        "eps":   [[[0], [1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]],
                  [[0, 1], [h, 0]], [[h, 0], [0, 2]], [[0], [2]], 0, 0],
        "zeta":  _per4([[0, 1]], [[0, 1]], [[h, 0]], [[h, 0]]),
        "psiU":  _per4(1, 1, -1, -1),
        "psiT":  _per4([[-1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, -1]]),
        "gamma": _per4([[0], [1]], [[1], [0]], [[1], [0]], [[0], [1]]),
        "tau":   [[[0, 1], [2, 0]], [[2, 0], [0, 1]], [[1, 0], [0, 2]],
                  [[1, 0], [0, 1]], [[1, 0]], 0, 0, [[0, 2]]],
    }
    return _instantiate(groups, ops)


def _tensor_zero_zero(k: int, l: int) -> CRTModule:
    g = gcd(k, l)
    k2, l2 = k // 2, l // 2
    groups = {
        "O": [[g], [2], [2, 2, 2], [2, 2], [2, g], [2], [], []],
        "U": _per2([g], []),
        "T": _per4([2, g], [2], [2, 2], [g]),
    }
    ops = {
        "c":     [1, 0, [[k2, 0, l2]], 0, [[0, 2]], 0, 0, 0],
        "r":     [2, 0, [[0], [1], [0]], 0, [[0], [1]], 0, 0, 0],
        "eps":   [[[0], [1]], 1, [[1, 0, 0], [0, 0, 1]], [[k2, l2]], [[1, 0], [0, 2]], 0, 0, 0],
        "zeta":  _per4([[0, 1]], 0, [[k2, l2]], 0),
        "psiU":  _per4(1, 0, -1, 0),
        "psiT":  _per4(1, 1, [[1, 0], [0, 1]], -1),
        "gamma": _per4(1, 0, 1, 0),
        "tau":   [[[0, 1]], [[0], [1], [0]], [[1, 0], [0, 1]], [[0], [1]],
                  [[1, 0]], 0, 0, 2],
    }
    return _instantiate(groups, ops)


def _tor_zero_zero(g: int) -> CRTModule:
    h = g // 2
    groups = {
        "O": [[g], [], [2], [], [h], [], [], []],
        "U": _per2([g], []),
        "T": _per4([g], [], [2], [h]),
    }
    ops = {
        "c":     [1, 0, h, 0, 2, 0, 0, 0],
        "r":     [2, 0, 0, 0, 1, 0, 0, 0],
        "eps":   [1, 0, 1, 0, 2, 0, 0, 0],
        "zeta":  _per4(1, 0, h, 0),
        "psiU":  _per4(1, 0, -1, 0),
        "psiT":  _per4(1, 0, 1, -1),
        "gamma": [1, 0, 0, 0, 1, 0, 0, 0],
        "tau":   [0, 0, 0, 1, 0, 0, 0, 2],
    }
    return _instantiate(groups, ops)


# ---------------------------------------------------------------------------
# Catalog entries and named lookup
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CatalogEntry:
    name: str
    module: CRTModule
    params: dict = field(default_factory=dict)
    resolution: Optional[FreeResolution] = None
    flags: dict = field(default_factory=dict)


def cuntz(k: int) -> CatalogEntry:
    """Catalog entry for the Cuntz module, with its resolution."""
    module = cuntz_module(k)
    res = cuntz_resolution(k)
    return CatalogEntry(f"O{k + 1}", module, {"k": k}, res)


_DATA_DIR_ENV = "CRT_DATA_DIR"


def data_dir() -> Path:
    override = os.environ.get(_DATA_DIR_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def _load_base(name: str) -> CRTModule:
    path = data_dir() / f"{name}.json"
    if path.exists():
        with open(path) as fh:
            return module_from_json(json.load(fh))
    return monogenic(name, 0).realized


def catalog_entry(name: str) -> CatalogEntry:
    """Look up R, C, T, zero, or O<k+1>."""
    if name in ("R", "C", "T"):
        return CatalogEntry(name, _load_base(name))
    if name == "zero":
        return CatalogEntry("zero", zero_module())
    if name.startswith("O"):
        m = int(name[1:])
        if m < 2:
            raise KeyError(f"bad Cuntz index in {name!r}")
        return cuntz(m - 1)
    raise KeyError(f"unknown catalog name {name!r}")


def catalog_names() -> list[str]:
    return ["R", "C", "T", "zero"] + [f"O{m}" for m in range(2, 14)]


def write_base_fixtures(path: Optional[Path] = None) -> list[Path]:
    """Serialize the three base modules as versioned JSON fixtures."""
    path = path or data_dir()
    path.mkdir(parents=True, exist_ok=True)
    out = []
    for name in ("R", "C", "T"):
        p = path / f"{name}.json"
        with open(p, "w") as fh:
            json.dump(module_to_json(monogenic(name, 0).realized), fh, indent=1, sort_keys=True)
        out.append(p)
    return out
