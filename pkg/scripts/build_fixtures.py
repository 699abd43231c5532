"""Regenerate the bundled fixtures under src/sliceprio/fixtures/.

The EOOSDG below is a hand-built dependence graph for the four-class
Shape/Rectangle/Triangle/TestShape example program (54 numbered lines plus
35 parameter nodes).  Only the node table of its affected slice, the
coverage table and the fault table are published; the edge set here is
our own construction, chosen so that a change at line 29 slices exactly
the 33 published ASG nodes.

    python scripts/build_fixtures.py
"""
from __future__ import annotations

from pathlib import Path

from sliceprio.fileio import dumps_faults, dumps_weights, write_graph
from sliceprio.graph import DependenceGraph, Edge, EdgeKind as E, Node, NodeKind as K, validate
from sliceprio.prioritize import FaultMatrix
from sliceprio.slicer import build_asg, hd_slice
from sliceprio.weights import WeightMap, WeightMode

OUT = Path(__file__).resolve().parents[1] / "src" / "sliceprio" / "fixtures"
CRITERION = "29"

# id, kind, parent, label
NODES = [
    ("1", K.PACKAGE, None, "package pkg"),
    ("2", K.STATEMENT, "1", "import java.util.*"),
    ("3", K.CLASS, "1", "class TestShape"),
    ("4", K.METHOD, "3", "main(String[] args)"),
    ("5", K.STATEMENT, "4", "String str"),
    ("6", K.STATEMENT, "4", "int a, b"),
    ("7", K.STATEMENT, "4", "Scanner sin = new Scanner(System.in)"),
    ("8", K.STATEMENT, "4", "println(\"Enter the Color: \")"),
    ("9", K.STATEMENT, "4", "str = sin.next()"),
    ("10", K.STATEMENT, "4", "println(\"Enter the length and breadth: \")"),
    ("11", K.STATEMENT, "4", "a = sin.nextInt()"),
    ("12", K.STATEMENT, "4", "b = sin.nextInt()"),
    ("13", K.STATEMENT, "4", "Shape s1 = new Rectangle(str, a, b)"),
    ("14", K.STATEMENT, "4", "println(s1)"),
    ("15", K.STATEMENT, "4", "println(\"Area is \" + s1.getArea())"),
    ("16", K.STATEMENT, "4", "println(\"Enter the Color: \")"),
    ("17", K.STATEMENT, "4", "str = sin.next()"),
    ("18", K.STATEMENT, "4", "println(\"Enter the length and breadth: \")"),
    ("19", K.STATEMENT, "4", "a = sin.nextInt()"),
    ("20", K.STATEMENT, "4", "b = sin.nextInt()"),
    ("21", K.STATEMENT, "4", "Shape s2 = new Triangle(str, a, b)"),
    ("22", K.STATEMENT, "4", "println(s2)"),
    ("23", K.STATEMENT, "4", "println(\"Area is \" + s2.getArea())"),
    ("24", K.CLASS, "1", "class Triangle<T> extends Shape"),
    ("25", K.ATTRIBUTE, "24", "private T base"),
    ("26", K.ATTRIBUTE, "24", "private T height"),
    ("27", K.METHOD, "24", "Triangle(String color, T base, T height)"),
    ("28", K.STATEMENT, "27", "super(color)"),
    ("29", K.STATEMENT, "27", "this.base = base"),
    ("30", K.STATEMENT, "27", "this.height = height"),
    ("31", K.METHOD, "24", "Triangle.toString()"),
    ("32", K.STATEMENT, "31", "return \"Triangle of base=\" + ..."),
    ("33", K.METHOD, "24", "Triangle.getArea()"),
    ("34", K.STATEMENT, "33", "return 0.5*base*height"),
    ("35", K.CLASS, "1", "class Rectangle extends Shape"),
    ("36", K.ATTRIBUTE, "35", "private int length"),
    ("37", K.ATTRIBUTE, "35", "private int width"),
    ("38", K.METHOD, "35", "Rectangle(String color, int length, int width)"),
    ("39", K.STATEMENT, "38", "super(color)"),
    ("40", K.STATEMENT, "38", "this.length = length"),
    ("41", K.STATEMENT, "38", "this.width = width"),
    ("42", K.METHOD, "35", "Rectangle.toString()"),
    ("43", K.STATEMENT, "42", "return \"Rectangle of length=\" + ..."),
    ("44", K.METHOD, "35", "Rectangle.getArea()"),
    ("45", K.STATEMENT, "44", "return length*width"),
    ("46", K.CLASS, "1", "class Shape"),
    ("47", K.ATTRIBUTE, "46", "private String color"),
    ("48", K.METHOD, "46", "Shape(String color)"),
    ("49", K.STATEMENT, "48", "this.color = color"),
    ("50", K.METHOD, "46", "Shape.toString()"),
    ("51", K.STATEMENT, "50", "return \"Shape of color=\" + color"),
    ("52", K.METHOD, "46", "Shape.getArea()"),
    ("53", K.STATEMENT, "52", "System.err.println(\"Shape unknown!...\")"),
    ("54", K.STATEMENT, "52", "return 0"),
    # parameter nodes
    ("A5", K.ACTUAL_IN, "21", "a (actual-in, new Triangle)"),
    ("A6", K.ACTUAL_IN, "21", "b (actual-in, new Triangle)"),
    ("A21_in1", K.ACTUAL_IN, "21", "str (actual-in, new Triangle)"),
    ("A21_1.out", K.ACTUAL_OUT, "21", "this.base (actual-out, new Triangle)"),
    ("A21_2.out", K.ACTUAL_OUT, "21", "this.height (actual-out, new Triangle)"),
    ("A3.out", K.ACTUAL_OUT, "23", "s2.getArea() result"),
    ("f3", K.FORMAL_IN, "27", "base (formal-in)"),
    ("f4", K.FORMAL_IN, "27", "height (formal-in)"),
    ("f27_in1", K.FORMAL_IN, "27", "color (formal-in)"),
    ("f27_1.out", K.FORMAL_OUT, "27", "this.base (formal-out)"),
    ("f27_2.out", K.FORMAL_OUT, "27", "this.height (formal-out)"),
    ("f3.out", K.FORMAL_OUT, "33", "Triangle.getArea() result"),
    ("f6.out", K.FORMAL_OUT, "52", "Shape.getArea() result"),
    ("A13_in1", K.ACTUAL_IN, "13", "str (actual-in, new Rectangle)"),
    ("A13_in2", K.ACTUAL_IN, "13", "a (actual-in, new Rectangle)"),
    ("A13_in3", K.ACTUAL_IN, "13", "b (actual-in, new Rectangle)"),
    ("A13_1.out", K.ACTUAL_OUT, "13", "this.length (actual-out)"),
    ("A13_2.out", K.ACTUAL_OUT, "13", "this.width (actual-out)"),
    ("f38_in1", K.FORMAL_IN, "38", "color (formal-in)"),
    ("f38_in2", K.FORMAL_IN, "38", "length (formal-in)"),
    ("f38_in3", K.FORMAL_IN, "38", "width (formal-in)"),
    ("f38_1.out", K.FORMAL_OUT, "38", "this.length (formal-out)"),
    ("f38_2.out", K.FORMAL_OUT, "38", "this.width (formal-out)"),
    ("A14_in", K.ACTUAL_IN, "14", "s1 (actual-in, println)"),
    ("A15.out", K.ACTUAL_OUT, "15", "s1.getArea() result"),
    ("A18_in", K.ACTUAL_IN, "18", "prompt (actual-in, println)"),
    ("A22_in", K.ACTUAL_IN, "22", "s2 (actual-in, println)"),
    ("A28_in", K.ACTUAL_IN, "28", "color (actual-in, super)"),
    ("A39_in", K.ACTUAL_IN, "39", "color (actual-in, super)"),
    ("f44.out", K.FORMAL_OUT, "44", "Rectangle.getArea() result"),
    ("f48_in", K.FORMAL_IN, "48", "color (formal-in)"),
    ("f48.out", K.FORMAL_OUT, "48", "this.color (formal-out)"),
    ("f31.out", K.FORMAL_OUT, "31", "Triangle.toString() result"),
    ("f42.out", K.FORMAL_OUT, "42", "Rectangle.toString() result"),
    ("f50.out", K.FORMAL_OUT, "50", "Shape.toString() result"),
]

DEPS = [
    # main
    ("2", "7", E.TYPE_DEP),
    ("7", "19", E.DATA_DEP), ("7", "20", E.DATA_DEP),
    ("6", "19", E.DATA_DEP), ("6", "20", E.DATA_DEP),
    ("19", "A5", E.DATA_DEP), ("20", "A6", E.DATA_DEP),
    ("21", "A5", E.CONTROL_DEP), ("21", "A6", E.CONTROL_DEP),
    ("21", "27", E.CALL),
    ("21", "23", E.DATA_DEP), ("21", "22", E.DATA_DEP),
    ("A21_1.out", "23", E.DATA_DEP), ("A21_2.out", "23", E.DATA_DEP),
    ("23", "33", E.CALL), ("23", "52", E.POLYMORPHIC_CALL),
    ("7", "9", E.DATA_DEP), ("7", "11", E.DATA_DEP), ("7", "12", E.DATA_DEP), ("7", "17", E.DATA_DEP),
    ("6", "11", E.DATA_DEP), ("6", "12", E.DATA_DEP),
    ("5", "9", E.DATA_DEP), ("5", "17", E.DATA_DEP),
    ("17", "A21_in1", E.DATA_DEP),
    ("9", "A13_in1", E.DATA_DEP), ("11", "A13_in2", E.DATA_DEP), ("12", "A13_in3", E.DATA_DEP),
    ("13", "38", E.CALL), ("13", "14", E.DATA_DEP), ("13", "15", E.DATA_DEP),
    ("13", "A14_in", E.DATA_DEP),
    ("A13_1.out", "15", E.DATA_DEP), ("A13_2.out", "15", E.DATA_DEP),
    ("15", "44", E.POLYMORPHIC_CALL),
    ("22", "A22_in", E.CONTROL_DEP),
    # Triangle
    ("A5", "f3", E.PARAMETER_IN), ("A6", "f4", E.GENERIC_IN),
    ("A21_in1", "f27_in1", E.PARAMETER_IN),
    ("f3", "29", E.DATA_DEP), ("f4", "30", E.DATA_DEP),
    ("25", "29", E.TYPE_DEP), ("26", "30", E.TYPE_DEP),
    ("29", "f27_1.out", E.DATA_DEP), ("30", "f27_2.out", E.DATA_DEP),
    ("f27_1.out", "A21_1.out", E.PARAMETER_OUT), ("f27_2.out", "A21_2.out", E.GENERIC_OUT),
    ("29", "34", E.DATA_DEP), ("30", "34", E.DATA_DEP),
    ("34", "f3.out", E.DATA_DEP), ("f3.out", "A3.out", E.PARAMETER_OUT),
    ("f27_in1", "A28_in", E.DATA_DEP), ("28", "48", E.CALL),
    ("A28_in", "f48_in", E.PARAMETER_IN),
    ("32", "f31.out", E.DATA_DEP), ("32", "50", E.CALL),
    # Rectangle
    ("A13_in1", "f38_in1", E.PARAMETER_IN), ("A13_in2", "f38_in2", E.PARAMETER_IN),
    ("A13_in3", "f38_in3", E.PARAMETER_IN),
    ("f38_in1", "A39_in", E.DATA_DEP), ("39", "48", E.CALL), ("A39_in", "f48_in", E.PARAMETER_IN),
    ("f38_in2", "40", E.DATA_DEP), ("f38_in3", "41", E.DATA_DEP),
    ("36", "40", E.TYPE_DEP), ("37", "41", E.TYPE_DEP),
    ("40", "f38_1.out", E.DATA_DEP), ("41", "f38_2.out", E.DATA_DEP),
    ("f38_1.out", "A13_1.out", E.PARAMETER_OUT), ("f38_2.out", "A13_2.out", E.PARAMETER_OUT),
    ("40", "45", E.DATA_DEP), ("41", "45", E.DATA_DEP),
    ("45", "f44.out", E.DATA_DEP), ("f44.out", "A15.out", E.PARAMETER_OUT),
    ("43", "f42.out", E.DATA_DEP), ("43", "50", E.CALL),
    # Shape
    ("f48_in", "49", E.DATA_DEP), ("47", "49", E.TYPE_DEP), ("49", "f48.out", E.DATA_DEP),
    ("47", "51", E.DATA_DEP), ("51", "f50.out", E.DATA_DEP),
    ("53", "54", E.CONTROL_DEP), ("54", "f6.out", E.DATA_DEP),
    ("f6.out", "A3.out", E.PARAMETER_OUT),
    # inheritance
    ("46", "24", E.INHERITED_MEMBERSHIP), ("46", "35", E.INHERITED_MEMBERSHIP),
    ("52", "33", E.METHOD_OVERRIDDEN), ("52", "44", E.METHOD_OVERRIDDEN),
    ("50", "31", E.METHOD_OVERRIDDEN), ("50", "42", E.METHOD_OVERRIDDEN),
]

# published node table; node 24 is 0.88375 in the table, 0.688664 when rolled up by hand
FIGURE2 = [
    ("1", 0.859375, 3), ("2", 0.9296875, 3), ("3", 0.953125, 3), ("4", 0.8125, 2),
    ("6", 0.84375, 3), ("7", 0.84375, 3), ("19", 0.65625, 1), ("20", 0.65625, 1),
    ("21", 0.7375, 2), ("23", 0.921875, 3), ("24", 0.88375, 1), ("25", 0.53125, 1),
    ("26", 0.53125, 1), ("27", 0.77678573, 2), ("29", 0.78125, 2), ("30", 0.78125, 2),
    ("33", 0.8854167, 3), ("34", 0.90625, 3), ("46", 0.7833333, 2), ("52", 0.8333333, 2),
    ("53", 0.78125, 2), ("54", 0.78125, 2), ("A21_1.out", 0.75, 2), ("A21_2.out", 0.75, 2),
    ("A3.out", 0.90625, 3), ("A5", 0.6875, 1), ("A6", 0.6875, 1), ("f27_1.out", 0.75, 2),
    ("f27_2.out", 0.75, 2), ("f3", 0.78125, 2), ("f3.out", 0.90625, 3), ("f4", 0.78125, 2),
    ("f6.out", 0.8125, 2),
]

TABLE3 = [
    ("T6", "1, 2, 3, 4, 6, 7"),
    ("T7", "1, 2, 21, 46, 27, f3, f4, 29, 30, f27_1.out, f27_2.out, 33, 34, f3.out, A3.out, "
           "24, 25, 26, A5, A6"),
    ("T8", "1, 2, 3, 4, 6, 7, 21, 46, 27, f3, f4, 29, 30, f27_1.out, f27_2.out, 19, 20, A5, A6, 25, 26"),
    ("T9", "1, 2, 3, 4, 6, 7, 21, 46, 52, 27, f4, 33, 30, f3.out, 34, 24, A6"),
    ("T10", "1, 2, 3, 4, 21, 23, A3.out, 46, 34, 33, f3.out, 24"),
]

TABLE1 = {
    "f1": ["T1", "T5", "T6"],
    "f2": ["T3", "T4", "T6"],
    "f3": ["T1", "T3", "T5"],
    "f4": ["T3", "T6"],
    "f5": ["T2", "T4"],
    "f6": ["T5", "T6"],
    "f7": ["T6"],
    "f8": ["T1"],
}


def build_eoosdg() -> DependenceGraph:
    nodes = [Node(i, k, label, parent) for i, k, parent, label in NODES]
    edges = [Edge(p, i, E.CONTAINMENT) for i, _, p, _ in NODES if p is not None]
    edges += [Edge(s, d, k) for s, d, k in DEPS]
    return DependenceGraph(nodes, edges)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    g = build_eoosdg()
    problems = validate(g)
    assert not problems, problems
    assert len(g) == 89, len(g)
    write_graph(g, OUT / "triangle_shape_eoosdg.json")

    s = hd_slice(g, CRITERION)
    published = {n for n, _, _ in FIGURE2}
    assert s.q == published, (sorted(s.q - published), sorted(published - s.q))
    write_graph(build_asg(g, s), OUT / "triangle_shape_asg.json")

    wm = WeightMap({n: w for n, _, w in FIGURE2}, WeightMode.INJECTED)
    text = "# node table of the example ASG; ids use the .out spelling of the coverage table\n"
    (OUT / "figure2_weights.csv").write_text(text + dumps_weights(wm, {n: a for n, a, _ in FIGURE2}),
                                             encoding="utf-8")

    cov = "# test id, covered ASG nodes\n" + "".join(
        f"{t},{','.join(x.strip() for x in nodes.split(','))}\n" for t, nodes in TABLE3)
    (OUT / "table3_coverage.csv").write_text(cov, encoding="utf-8")

    fm = FaultMatrix.from_rows([f"T{i}" for i in range(1, 7)], TABLE1)
    (OUT / "table1_faults.csv").write_text(dumps_faults(fm), encoding="utf-8")
    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
