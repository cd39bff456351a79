"""Regenerate the JSON fixtures: python3 tests/fixtures/make_fixtures.py"""
import json
import pathlib

from groundzx import builders as B
from groundzx.diagram import identity, single, Node
from groundzx.io import diagram_to_json, print_diagram
from groundzx.params import Phase

HERE = pathlib.Path(__file__).parent
P = Phase.pi


def write(name, obj):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=1)
    (HERE / name).write_text(text + "\n")


def proof(initial, steps, final):
    return {"initial": diagram_to_json(initial), "steps": steps, "final": diagram_to_json(final)}


H = single("ZX", Node("H", 1, 1))
chain = B.z_spider(1, 1, P(1, 4)) >> B.z_spider(1, 1, P(1, 2)) >> B.z_spider(1, 1, P(5, 4))
fuse = {"rule": "S1", "library": "zx-full", "dir": "L->R", "index": 0, "legs": [1, 0, 0, 1]}

write("proof_h2.json", proof(H >> H, [{"rule": "h2", "library": "zx-full", "dir": "L->R", "index": 0}], identity(1)))
write(
    "proof_spider_chain.json",
    proof(chain, [fuse, fuse, {"rule": "S2", "library": "zx-full", "dir": "L->R", "index": 0}], identity(1)),
)
write(
    "proof_ground_cnot.json",
    proof(
        B.cnot() >> B.ground(2),
        [
            {"rule": "ground-cnot", "library": "zx-ground", "dir": "L->R", "index": 0},
            {"rule": "refl", "library": "zx-ground"},
            {"rule": "refl", "library": "zx-ground"},
        ],
        B.ground(2),
    ),
)
# the second fusion is replaced by a rule that does not occur
write(
    "proof_corrupted.json",
    proof(
        chain,
        [fuse, {"rule": "h2", "library": "zx-full", "dir": "L->R", "index": 0},
         {"rule": "S2", "library": "zx-full", "dir": "L->R", "index": 0}],
        identity(1),
    ),
)
# Z(2,1) is not an isometry, so no ground rule can delete it
write(
    "proof_ground_nonisometry.json",
    proof(
        B.z_spider(2, 1) >> B.ground(),
        [{"rule": "ground-gn", "library": "zx-ground", "dir": "L->R", "index": 0, "legs": [1]}],
        B.ground(2),
    ),
)

write("cnot.json", print_diagram(B.cnot()))
write("hh.json", print_diagram(H >> H))
write("identity1.json", print_diagram(identity(1)))
write("ground_h.json", print_diagram(B.h() >> B.ground()))
write("ground1.json", print_diagram(B.ground()))
write("discard_cnot.json", print_diagram(B.cnot() >> B.ground(2)))
write("ground2.json", print_diagram(B.ground(2)))
write("t_gate.json", print_diagram(B.t()))
write("z21.json", print_diagram(B.z_spider(2, 1)))
write("ket0.json", print_diagram(B.ket0()))
write("scalar_phase.json", print_diagram(B.global_phase(P(1, 3))))
write("empty.json", print_diagram(B.empty_diagram()))
