"""A fixed corpus of expressions used by the engine and acceptance tests."""
from shakecert.expr import parse_expr

CORPUS_TEXT = [
    "unknot",
    "(torus 2 3)",
    "(torus 2 5)",
    "(torus 3 4)",
    "(torus 3 5)",
    "(mirror (torus 2 3))",
    "(rev (torus 3 7))",
    "(wh (torus 2 3))",
    "(wh (mirror (torus 2 3)))",
    "(wh unknot)",
    "(sum (torus 2 3) (torus 2 5))",
    "(sum (torus 2 3) (mirror (torus 2 3)))",
    "(sum (wh (torus 2 3)) (wh (torus 2 3)) (wh (torus 2 3)))",
    "(sum (torus 3 4) (wh (torus 2 5)))",
    "(sat mazur :r 0 (wh (torus 2 3)))",
    "(sat mazur :r -2 (torus 2 5))",
    "(sat mazur :r 1 (sat mazur :r 1 (wh (torus 2 3))))",
    "(sat mazur :r 0 (sat mazur :r 0 (sat mazur :r 0 (torus 2 3))))",
    "(sat core :r 4 (torus 3 4))",
    "(sat r0 :r 1 unknot)",
    "(sat r1 :r 3 unknot)",
    "(sat r2 :r 2 unknot)",
    "(sat r1 :r 0 (torus 2 5))",
    "(sat mazur :r -1 unknot)",
    "(mirror (sat mazur :r 0 (torus 2 3)))",
    "(rev (wh (torus 3 4)))",
    "(wh (wh (torus 2 3)))",
    "(sum (sat mazur :r 0 (torus 2 3)) (mirror (torus 2 5)))",
    "(sat mazur :r 2 (sum (torus 2 3) (torus 2 3)))",
    "(sum (torus 2 7) (rev (mirror (torus 2 7))))",
]

CORPUS = [parse_expr(t) for t in CORPUS_TEXT]

CONFLUENCE_FIXTURES = CORPUS[::3]
