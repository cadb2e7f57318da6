"""Hand-built geometry pairs with reference answers.

Each expected value was produced once by the sampling oracle
(solap_enrich.oracle.oracle_predicate / oracle_relate) and frozen here, so the
suite does not pay the oracle's cost and cannot drift with it.
"""

SQ = "POLYGON((0 0,4 0,4 4,0 4,0 0))"
SQ_ROT = "POLYGON((4 0,4 4,0 4,0 0,4 0))"
SQ_BIG = "POLYGON((0 0,4.5 0,4.5 4.5,0 4.5,0 0))"
INNER = "POLYGON((1 1,2 1,2 2,1 2,1 1))"
HALF = "POLYGON((2 0,6 0,6 4,2 4,2 0))"
RIGHT = "POLYGON((4 0,8 0,8 4,4 4,4 0))"
CORNER = "POLYGON((4 4,6 4,6 6,4 6,4 4))"
FAR = "POLYGON((10 10,12 10,12 12,10 12,10 10))"
# U-shape: notch between x=1 and x=3 above y=1
U = "POLYGON((0 0,4 0,4 4,3 4,3 1,1 1,1 4,0 4,0 0))"
PART_A = "POLYGON((0 0,2 0,2 2,0 2,0 0))"
PART_B = "POLYGON((3 0,5 0,5 2,3 2,3 0))"
STRADDLE = "POLYGON((1.5 0.5,3.5 0.5,3.5 1.5,1.5 1.5,1.5 0.5))"

# (case id, relation, a literals, b literals, mode, expected)
PREDICATE_CASES = [
    # equals
    ("eq-pt-same", "equals", ["POINT(1 1)"], ["POINT(1 1)"], "exact", True),
    ("eq-pt-diff", "equals", ["POINT(1 1)"], ["POINT(1 2)"], "exact", False),
    ("eq-ln-resampled", "equals", ["LINESTRING(0 0,2 2)"], ["LINESTRING(0 0,1 1,2 2)"], "exact", True),
    ("eq-ln-diff", "equals", ["LINESTRING(0 0,2 2)"], ["LINESTRING(0 0,2 2.5)"], "exact", False),
    ("eq-pg-rotated", "equals", [SQ], [SQ_ROT], "exact", True),
    ("eq-pg-larger", "equals", [SQ], [SQ_BIG], "exact", False),
    ("eq-pt-multi", "equals", ["POINT(1 1)", "POINT(1 1)"], ["POINT(1 1)"], "exact", True),
    ("eq-pt-multi-diff", "equals", ["POINT(1 1)", "POINT(2 2)"], ["POINT(1 1)", "POINT(2 2)"], "exact", False),
    # within
    ("wi-pt-pg-inside", "within", ["POINT(2 2)"], [SQ], "exact", True),
    ("wi-pt-pg-edge", "within", ["POINT(4 2)"], [SQ], "exact", True),
    ("wi-pt-pg-outside", "within", ["POINT(5 2)"], [SQ], "exact", False),
    ("wi-pt-ln-on", "within", ["POINT(1 1)"], ["LINESTRING(0 0,2 2)"], "exact", True),
    ("wi-pt-ln-off", "within", ["POINT(1 1.5)"], ["LINESTRING(0 0,2 2)"], "exact", False),
    ("wi-ln-pg-inside", "within", ["LINESTRING(1 1,3 3)"], [SQ], "exact", True),
    ("wi-ln-pg-on-edge", "within", ["LINESTRING(0 1,0 3)"], [SQ], "exact", True),
    ("wi-ln-pg-u-chord", "within", ["LINESTRING(0.5 3,3.5 3)"], [U], "exact", False),
    ("wi-ln-pg-u-arm", "within", ["LINESTRING(0.5 0.5,0.5 3.5)"], [U], "exact", True),
    ("wi-ln-ln-sub", "within", ["LINESTRING(1 1,2 2)"], ["LINESTRING(0 0,3 3)"], "exact", True),
    ("wi-ln-ln-partial", "within", ["LINESTRING(2 2,4 4)"], ["LINESTRING(0 0,3 3)"], "exact", False),
    ("wi-pg-pg-nested", "within", [INNER], [SQ], "exact", True),
    ("wi-pg-pg-self", "within", [INNER], [INNER], "exact", True),
    ("wi-pg-pg-half", "within", [HALF], [SQ], "exact", False),
    ("wi-pg-pg-u-bridge", "within", ["POLYGON((0.5 2,3.5 2,3.5 3,0.5 3,0.5 2))"], [U], "exact", False),
    ("wi-pg-multi-exact", "within", [STRADDLE], [PART_A, PART_B], "exact", False),
    ("wi-pg-multi-bbox", "within", [STRADDLE], [PART_A, PART_B], "bbox", True),
    ("wi-pg-multichild", "within", [INNER, "POLYGON((2.5 2.5,3 2.5,3 3,2.5 3,2.5 2.5))"], [SQ], "exact", True),
    ("wi-pg-multichild-one-out", "within", [INNER, CORNER], [SQ], "exact", False),
    # intersects
    ("in-pt-pt-same", "intersects", ["POINT(3 3)"], ["POINT(3 3)"], "exact", True),
    ("in-pt-pt-diff", "intersects", ["POINT(3 3)"], ["POINT(3 4)"], "exact", False),
    ("in-pt-ln-vertex", "intersects", ["POINT(2 2)"], ["LINESTRING(0 0,2 2,4 0)"], "exact", True),
    ("in-pt-ln-off", "intersects", ["POINT(2 1)"], ["LINESTRING(0 0,2 2,4 0)"], "exact", False),
    ("in-pt-pg-corner", "intersects", ["POINT(4 4)"], [SQ], "exact", True),
    ("in-pt-pg-out", "intersects", ["POINT(4 5)"], [SQ], "exact", False),
    ("in-ln-ln-cross", "intersects", ["LINESTRING(0 0,2 2)"], ["LINESTRING(0 2,2 0)"], "exact", True),
    ("in-ln-ln-parallel", "intersects", ["LINESTRING(0 0,2 0)"], ["LINESTRING(0 1,2 1)"], "exact", False),
    ("in-ln-ln-endpoint", "intersects", ["LINESTRING(0 0,1 1)"], ["LINESTRING(1 1,2 0)"], "exact", True),
    ("in-ln-pg-through", "intersects", ["LINESTRING(-1 2,5 2)"], [SQ], "exact", True),
    ("in-ln-pg-outside", "intersects", ["LINESTRING(5 0,5 4)"], [SQ], "exact", False),
    ("in-ln-pg-touch", "intersects", ["LINESTRING(4 4,6 6)"], [SQ], "exact", True),
    ("in-ln-pg-u-notch", "intersects", ["LINESTRING(1.5 2,2.5 3)"], [U], "exact", False),
    ("in-pg-pg-half", "intersects", [HALF], [SQ], "exact", True),
    ("in-pg-pg-edge", "intersects", [RIGHT], [SQ], "exact", True),
    ("in-pg-pg-corner", "intersects", [CORNER], [SQ], "exact", True),
    ("in-pg-pg-far", "intersects", [FAR], [SQ], "exact", False),
    ("in-pg-pg-nested", "intersects", [INNER], [SQ], "exact", True),
    ("in-pg-multi-some", "intersects", [FAR, INNER], [SQ], "exact", True),
    # overlaps
    ("ov-ln-ln-shared-run", "overlaps", ["LINESTRING(0 0,2 0)"], ["LINESTRING(1 0,3 0)"], "exact", True),
    ("ov-ln-ln-cross", "overlaps", ["LINESTRING(0 0,2 2)"], ["LINESTRING(0 2,2 0)"], "exact", False),
    ("ov-ln-ln-contained", "overlaps", ["LINESTRING(1 0,2 0)"], ["LINESTRING(0 0,3 0)"], "exact", False),
    ("ov-pg-pg-half", "overlaps", [HALF], [SQ], "exact", True),
    ("ov-pg-pg-nested", "overlaps", [INNER], [SQ], "exact", False),
    ("ov-pg-pg-edge", "overlaps", [RIGHT], [SQ], "exact", False),
    # crosses
    ("cr-ln-ln-x", "crosses", ["LINESTRING(0 0,2 2)"], ["LINESTRING(0 2,2 0)"], "exact", True),
    ("cr-ln-ln-collinear", "crosses", ["LINESTRING(0 0,2 0)"], ["LINESTRING(1 0,3 0)"], "exact", False),
    ("cr-ln-ln-endpoint", "crosses", ["LINESTRING(0 0,1 1)"], ["LINESTRING(1 1,2 0)"], "exact", False),
    ("cr-ln-pg-through", "crosses", ["LINESTRING(-1 2,5 2)"], [SQ], "exact", True),
    ("cr-ln-pg-inside", "crosses", ["LINESTRING(1 1,3 3)"], [SQ], "exact", False),
    ("cr-ln-pg-outside", "crosses", ["LINESTRING(5 0,5 4)"], [SQ], "exact", False),
    ("cr-ln-pg-u-chord", "crosses", ["LINESTRING(0.5 3,3.5 3)"], [U], "exact", True),
]

# (case id, child literals, parent literals, mode, expected relation or None)
RELATE_CASES = [
    ("rel-pt-pt-equal", ["POINT(1 1)"], ["POINT(1 1)"], "exact", "equals"),
    ("rel-pt-pt-apart", ["POINT(1 1)"], ["POINT(2 1)"], "exact", None),
    ("rel-pt-ln", ["POINT(1 1)"], ["LINESTRING(0 0,2 2)"], "exact", "intersects"),
    ("rel-pt-pg-inside", ["POINT(2 2)"], [SQ], "exact", "within"),
    ("rel-pt-pg-out", ["POINT(9 9)"], [SQ], "exact", None),
    ("rel-ln-ln-cross", ["LINESTRING(0 0,2 2)"], ["LINESTRING(0 2,2 0)"], "exact", "intersects"),
    ("rel-ln-pg-inside", ["LINESTRING(1 1,3 3)"], [SQ], "exact", "within"),
    ("rel-ln-pg-through", ["LINESTRING(-1 2,5 2)"], [SQ], "exact", "intersects"),
    ("rel-pg-pg-nested", [INNER], [SQ], "exact", "within"),
    ("rel-pg-pg-straddle", [HALF], [SQ], "exact", "intersects"),
    ("rel-pg-pg-far", [FAR], [SQ], "exact", None),
    ("rel-pg-multi-exact", [STRADDLE], [PART_A, PART_B], "exact", "intersects"),
    ("rel-pg-multi-bbox", [STRADDLE], [PART_A, PART_B], "bbox", "within"),
]

# Combinations no predicate is defined for (child kind, parent kind, relation).
UNSUPPORTED_CELLS = [
    ("within", "POINT(1 1)", "POINT(1 1)"),
    ("overlaps", "POINT(1 1)", "POINT(1 1)"),
    ("overlaps", "POINT(1 1)", "LINESTRING(0 0,2 2)"),
    ("overlaps", "POINT(1 1)", SQ),
    ("crosses", "POINT(1 1)", "POINT(1 1)"),
    ("crosses", "POINT(1 1)", "LINESTRING(0 0,2 2)"),
    ("crosses", "POINT(1 1)", SQ),
    ("crosses", INNER, SQ),
    ("equals", "POINT(1 1)", "LINESTRING(0 0,2 2)"),
    ("equals", "POINT(1 1)", SQ),
    ("equals", "LINESTRING(0 0,2 2)", SQ),
    ("overlaps", "LINESTRING(0 0,2 2)", SQ),
    ("within", "LINESTRING(0 0,2 2)", "POINT(1 1)"),
    ("within", SQ, "POINT(1 1)"),
    ("within", SQ, "LINESTRING(0 0,2 2)"),
    ("intersects", "LINESTRING(0 0,2 2)", "POINT(1 1)"),
    ("intersects", SQ, "POINT(1 1)"),
    ("intersects", SQ, "LINESTRING(0 0,2 2)"),
]

# Child of higher dimension than its parent: never related, never evaluated.
HIGHER_DIM_CHILD = [
    ("LINESTRING(0 0,2 2)", "POINT(1 1)"),
    (SQ, "POINT(1 1)"),
    (SQ, "LINESTRING(0 0,2 2)"),
]
