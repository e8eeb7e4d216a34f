"""Static lookup tables for multi-label marching triangles and tetrahedra.

A point recipe is a bitmask over the local vertices of a cell (bit ``i`` set
means local vertex ``i`` participates); the point is the plain average of the
participating vertex positions.  Local vertices are always in ascending
global id order, so the same face produces bit-identical points in every cell
that contains it.

Each primitive also records two local vertices whose labels it separates
(separators) or the single local vertex whose label it is tagged with
(boundaries, stored as ``(i, i)``).
"""

import numpy as np

# triangle codes: b is bit 2, c is bits 1-0
TRIANGLE_CODES = (0, 2, 4, 5, 6)

# tetrahedron codes: b is bit 4, c bits 3-2, d bits 1-0
TETRA_CODES = (0, 3, 8, 10, 11, 16, 17, 19, 20, 21, 23, 24, 25, 26, 27)

TRIANGLE_SEPARATORS = {
    0: [],
    2: [  # (0, 0, 1)
        ((0b101, 0b110), (0, 2)),
    ],
    4: [  # (0, 1, 0)
        ((0b011, 0b110), (0, 1)),
    ],
    5: [  # (0, 1, 1)
        ((0b011, 0b101), (0, 1)),
    ],
    6: [  # (0, 1, 2)
        ((0b111, 0b011), (0, 1)),
        ((0b111, 0b110), (1, 2)),
        ((0b111, 0b101), (0, 2)),
    ],
}

TETRA_SEPARATORS = {
    0: [  # (0, 0, 0, 0)
    ],
    3: [  # (0, 0, 0, 1)
        ((0b1001, 0b1010, 0b1100), (0, 3)),
    ],
    8: [  # (0, 0, 1, 0)
        ((0b0101, 0b0110, 0b1100), (0, 2)),
    ],
    10: [  # (0, 0, 1, 1)
        ((0b0101, 0b1001, 0b0110), (0, 2)),
        ((0b1001, 0b0110, 0b1010), (0, 2)),
    ],
    11: [  # (0, 0, 1, 2)
        ((0b1101, 0b1110, 0b0101), (0, 2)),
        ((0b1110, 0b0101, 0b0110), (0, 2)),
        ((0b1101, 0b1110, 0b1100), (2, 3)),
        ((0b1101, 0b1110, 0b1001), (0, 3)),
        ((0b1110, 0b1001, 0b1010), (0, 3)),
    ],
    16: [  # (0, 1, 0, 0)
        ((0b0011, 0b0110, 0b1010), (0, 1)),
    ],
    17: [  # (0, 1, 0, 1)
        ((0b0011, 0b1001, 0b0110), (0, 1)),
        ((0b1001, 0b0110, 0b1100), (0, 1)),
    ],
    19: [  # (0, 1, 0, 2)
        ((0b1011, 0b1110, 0b0011), (0, 1)),
        ((0b1110, 0b0011, 0b0110), (0, 1)),
        ((0b1011, 0b1110, 0b1010), (1, 3)),
        ((0b1011, 0b1110, 0b1001), (0, 3)),
        ((0b1110, 0b1001, 0b1100), (0, 3)),
    ],
    20: [  # (0, 1, 1, 0)
        ((0b0011, 0b0101, 0b1010), (0, 1)),
        ((0b0101, 0b1010, 0b1100), (0, 1)),
    ],
    21: [  # (0, 1, 1, 1)
        ((0b0011, 0b0101, 0b1001), (0, 1)),
    ],
    23: [  # (0, 1, 1, 2)
        ((0b1011, 0b1101, 0b0011), (0, 1)),
        ((0b1101, 0b0011, 0b0101), (0, 1)),
        ((0b1011, 0b1101, 0b1001), (0, 3)),
        ((0b1011, 0b1101, 0b1010), (1, 3)),
        ((0b1101, 0b1010, 0b1100), (1, 3)),
    ],
    24: [  # (0, 1, 2, 0)
        ((0b0111, 0b1110, 0b0011), (0, 1)),
        ((0b1110, 0b0011, 0b1010), (0, 1)),
        ((0b0111, 0b1110, 0b0110), (1, 2)),
        ((0b0111, 0b1110, 0b0101), (0, 2)),
        ((0b1110, 0b0101, 0b1100), (0, 2)),
    ],
    25: [  # (0, 1, 2, 1)
        ((0b0111, 0b1101, 0b0011), (0, 1)),
        ((0b1101, 0b0011, 0b1001), (0, 1)),
        ((0b0111, 0b1101, 0b0101), (0, 2)),
        ((0b0111, 0b1101, 0b0110), (1, 2)),
        ((0b1101, 0b0110, 0b1100), (1, 2)),
    ],
    26: [  # (0, 1, 2, 2)
        ((0b0111, 0b1011, 0b0101), (0, 2)),
        ((0b1011, 0b0101, 0b1001), (0, 2)),
        ((0b0111, 0b1011, 0b0011), (0, 1)),
        ((0b0111, 0b1011, 0b0110), (1, 2)),
        ((0b1011, 0b0110, 0b1010), (1, 2)),
    ],
    27: [  # (0, 1, 2, 3)
        ((0b1111, 0b0111, 0b0011), (0, 1)),
        ((0b1111, 0b0111, 0b0101), (0, 2)),
        ((0b1111, 0b0111, 0b0110), (1, 2)),
        ((0b1111, 0b1011, 0b0011), (0, 1)),
        ((0b1111, 0b1011, 0b1001), (0, 3)),
        ((0b1111, 0b1011, 0b1010), (1, 3)),
        ((0b1111, 0b1101, 0b0101), (0, 2)),
        ((0b1111, 0b1101, 0b1001), (0, 3)),
        ((0b1111, 0b1101, 0b1100), (2, 3)),
        ((0b1111, 0b1110, 0b0110), (1, 2)),
        ((0b1111, 0b1110, 0b1010), (1, 3)),
        ((0b1111, 0b1110, 0b1100), (2, 3)),
    ],
}

# the face (edge in 2-D) spanned by the vertices sharing the majority label
TRIANGLE_BOUNDARIES = {
    2: [((0b001, 0b010), (0, 0))],
    4: [((0b001, 0b100), (0, 0))],
    5: [((0b010, 0b100), (1, 1))],
}

TETRA_BOUNDARIES = {
    3: [((0b0001, 0b0010, 0b0100), (0, 0))],
    8: [((0b0001, 0b0010, 0b1000), (0, 0))],
    16: [((0b0001, 0b0100, 0b1000), (0, 0))],
    21: [((0b0010, 0b0100, 0b1000), (1, 1))],
}


def _pack(table, n_codes, arity):
    max_prims = max(1, max(len(v) for v in table.values()))
    counts = np.zeros(n_codes, dtype=np.int64)
    points = np.zeros((n_codes, max_prims, arity), dtype=np.int64)
    sides = np.zeros((n_codes, max_prims, 2), dtype=np.int64)
    for code, prims in table.items():
        counts[code] = len(prims)
        for k, (recipe, side) in enumerate(prims):
            points[code, k] = recipe
            sides[code, k] = side
    return counts, points, sides


TRI_SEP = _pack(TRIANGLE_SEPARATORS, 8, 2)
TET_SEP = _pack(TETRA_SEPARATORS, 32, 3)
TRI_BND = _pack(TRIANGLE_BOUNDARIES, 8, 2)
TET_BND = _pack(TETRA_BOUNDARIES, 32, 3)
