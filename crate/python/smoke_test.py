"""Quick check that the extension module loads and agrees with known values."""

import math

import treecut

l_shape = treecut.Tree([(0, 0.0, 0.0), (1, 1.0, 0.0), (2, 1.0, 1.0)], [(0, 1), (1, 2)])
best = l_shape.optimize()
expected = 2 - (2 - math.sqrt(2)) * 2 / (4 - math.sqrt(2))
assert abs(best["diameter_after"] - expected) < 1e-6, best
assert best["useful"]

hook = treecut.Tree.from_json(
    '{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":4,"y":0},{"id":2,"x":4,"y":4},{"id":3,"x":4,"y":-4}],'
    '"edges":[[0,1],[1,2],[1,3]]}'
)
p, q = treecut.TreePoint(0, 1, 0.0), treecut.TreePoint(2, 1, 0.0)
assert abs(hook.evaluate(p, q)["diameter"] - (8 + 2 * math.sqrt(2))) < 1e-9
assert hook.usefulness(p, q) == "useless"
assert hook.backbone()["is_point"]

tree = treecut.Tree.random(7, 12, "caterpillar")
assert treecut.Tree.from_json(tree.to_json()).to_json() == tree.to_json()
h = tree.backbone()["diameter"] / 200
assert tree.optimize()["diameter_after"] <= tree.grid_search(h)["diameter"] + 4 * h
assert tree.render_svg().startswith("<?xml")

try:
    treecut.Tree([(0, 0.0, 0.0)], [])
except ValueError:
    pass
else:
    raise AssertionError("a single vertex is not a tree")

print("smoke test passed")
