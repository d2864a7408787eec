"""Literal data for the three monogenic free CRT-modules.

Groups are invariant lists per window degree 0..7 ([] = 0, [0] = Z,
[2] = Z_2, [0, 0] = Z^2, [0, 2] = Z + Z_2).  Operation entries are scalars
for maps between cyclic-or-trivial groups and row-lists otherwise, read as
matrices acting on coordinate columns of the ordered generators.  The
whole artifact leans on these constants; the relation and acyclicity
suites double as transcription checksums, and the degree-8 column of each
source table is asserted against degree 0 in the tests.
"""

# Real base module: free on one generator in the real part, degree 0.
TABLE_R = {
    "groups": {
        "O": [[0], [2], [2], [], [0], [], [], []],
        "U": [[0], [], [0], [], [0], [], [0], []],
        "T": [[0], [2], [], [0], [0], [2], [], [0]],
    },
    "ops": {
        "c":     [1, 0, 0, 0, 2, 0, 0, 0],
        "r":     [2, 0, 1, 0, 1, 0, 0, 0],
        "eps":   [1, 1, 0, 0, 2, 0, 0, 0],
        "zeta":  [1, 0, 0, 0, 1, 0, 0, 0],
        "psiU":  [1, 0, -1, 0, 1, 0, -1, 0],
        "psiT":  [1, 1, 0, -1, 1, 1, 0, -1],
        "gamma": [1, 0, 1, 0, 1, 0, 1, 0],
        "tau":   [1, 1, 0, 1, 0, 0, 0, 2],
    },
}

# Complex base module: free on one generator in the complex part, degree 0.
TABLE_C = {
    "groups": {
        "O": [[0], [], [0], [], [0], [], [0], []],
        "U": [[0, 0], [], [0, 0], [], [0, 0], [], [0, 0], []],
        "T": [[0], [0], [0], [0], [0], [0], [0], [0]],
    },
    "ops": {
        "c":     [[[1], [1]], 0, [[-1], [1]], 0, [[1], [1]], 0, [[-1], [1]], 0],
        "r":     [[[1, 1]], 0, [[-1, 1]], 0, [[1, 1]], 0, [[-1, 1]], 0],
        "eps":   [1, 0, -1, 0, 1, 0, -1, 0],
        "zeta":  [[[1], [1]], 0, [[1], [-1]], 0, [[1], [1]], 0, [[1], [-1]], 0],
        "psiU":  [[[0, 1], [1, 0]], 0, [[0, -1], [-1, 0]], 0,
                  [[0, 1], [1, 0]], 0, [[0, -1], [-1, 0]], 0],
        "psiT":  [1, -1, 1, -1, 1, -1, 1, -1],
        "gamma": [[[1, 1]], 0, [[1, -1]], 0, [[1, 1]], 0, [[1, -1]], 0],
        "tau":   [0, -1, 0, 1, 0, -1, 0, 1],
    },
}

# Self-conjugate base module: free on the generator (-1, 0) sitting in the
# self-conjugate part in degree -1 (stored window 7).
TABLE_T = {
    "groups": {
        "O": [[0], [2], [], [0], [0], [2], [], [0]],
        "U": [[0], [0], [0], [0], [0], [0], [0], [0]],
        "T": [[0, 2], [2], [0], [0, 0], [0, 2], [2], [0], [0, 0]],
    },
    "ops": {
        "c":     [1, 0, 0, 2, 1, 0, 0, 2],
        "r":     [2, 1, 0, 1, 2, 1, 0, 1],
        "eps":   [[[1], [0]], 1, 0, [[2], [1]], [[1], [1]], 1, 0, [[2], [1]]],
        "zeta":  [[[1, 0]], 0, 0, [[1, 0]], [[1, 0]], 0, 0, [[1, 0]]],
        "psiU":  [1, -1, -1, 1, 1, -1, -1, 1],
        "psiT":  [[[1, 0], [0, 1]], 1, -1, [[1, 0], [1, -1]],
                  [[1, 0], [0, 1]], 1, -1, [[1, 0], [1, -1]]],
        "gamma": [[[0], [1]], [[0], [1]], 1, 1, [[0], [1]], [[0], [1]], 1, 1],
        "tau":   [[[1, 1]], 0, 1, [[-1, 2]], [[0, 1]], 0, 1, [[-1, 2]]],
    },
}

BASE_TABLES = {"R": TABLE_R, "C": TABLE_C, "T": TABLE_T}

# Part and stored coordinates of the free generator of each base module.
GENERATOR = {
    "R": ("O", 0, (1,)),
    "C": ("U", 0, (1, 0)),
    "T": ("T", -1, (-1, 0)),
}

# Basis vectors of each base module as operation words applied to the
# generator, keyed by part and window offset from the generator degree.
# Each entry is a list (one per basis vector) of (sign, tokens); tokens
# compose right to left.  Validated against the stored tables by tests.
BASIS_WORDS = {
    "R": {
        "O": {
            0: [(1, ())],
            1: [(1, ("etaO",))],
            2: [(1, ("etaO", "etaO"))],
            4: [(1, ("xi",))],
        },
        "U": {
            0: [(1, ("c",))],
            2: [(1, ("betaU", "c"))],
            4: [(1, ("betaU", "betaU", "c"))],
            6: [(1, ("betaU", "betaU", "betaU", "c"))],
        },
        "T": {
            0: [(1, ("eps",))],
            1: [(1, ("etaT", "eps"))],
            3: [(1, ("omega", "eps"))],
            4: [(1, ("betaT", "eps"))],
            5: [(1, ("betaT", "etaT", "eps"))],
            7: [(1, ("betaT", "omega", "eps"))],
        },
    },
    "C": {
        "O": {
            0: [(1, ("r",))],
            2: [(-1, ("r", "betaU"))],
            4: [(1, ("r", "betaU", "betaU"))],
            6: [(-1, ("r", "betaU", "betaU", "betaU"))],
        },
        "U": {
            0: [(1, ()), (1, ("psiU",))],
            2: [(1, ("betaU",)), (1, ("betaU", "psiU"))],
            4: [(1, ("betaU", "betaU")), (1, ("betaU", "betaU", "psiU"))],
            6: [(1, ("betaU", "betaU", "betaU")), (1, ("betaU", "betaU", "betaU", "psiU"))],
        },
        "T": {
            0: [(1, ("eps", "r"))],
            1: [(1, ("gamma", "betaU"))],
            2: [(1, ("eps", "r", "betaU"))],
            3: [(1, ("gamma", "betaU", "betaU"))],
            4: [(1, ("eps", "r", "betaU", "betaU"))],
            5: [(1, ("gamma", "betaU", "betaU", "betaU"))],
            6: [(1, ("eps", "r", "betaU", "betaU", "betaU"))],
            7: [(1, ("gamma", "betaU", "betaU", "betaU", "betaU"))],
        },
    },
    "T": {
        "O": {
            0: [(-1, ("tau", "betaT", "omega"))],
            1: [(1, ("tau",))],
            2: [(1, ("etaO", "tau"))],
            4: [(-1, ("tau", "omega"))],
            5: [(1, ("tau", "betaT"))],
            6: [(1, ("etaO", "tau", "betaT"))],
        },
        "U": {
            0: [(-1, ("zeta",))],
            1: [(1, ("c", "tau"))],
            2: [(-1, ("betaU", "zeta"))],
            3: [(1, ("betaU", "c", "tau"))],
            4: [(-1, ("betaU", "betaU", "zeta"))],
            5: [(1, ("betaU", "betaU", "c", "tau"))],
            6: [(-1, ("betaU", "betaU", "betaU", "zeta"))],
            7: [(1, ("betaU", "betaU", "betaU", "c", "tau"))],
        },
        "T": {
            # canonical generator order puts the torsion generator first,
            # so the etaT-word precedes the eps.tau-word at offsets 1 and 5
            0: [(-1, ()), (1, ("betaT", "gamma", "betaU", "betaU", "c", "tau"))],
            1: [(1, ("etaT",)), (1, ("eps", "tau"))],
            2: [(1, ("etaT", "eps", "tau"))],
            3: [(-1, ("omega",))],
            4: [(-1, ("betaT",)), (1, ("gamma", "betaU", "betaU", "c", "tau"))],
            5: [(1, ("betaT", "etaT")), (1, ("betaT", "eps", "tau"))],
            6: [(1, ("betaT", "etaT", "eps", "tau"))],
            7: [(-1, ("betaT", "omega"))],
        },
    },
}
