"""The on-disk fixture corpus used by the CLI tests and the acceptance suite."""

import json
import random
from pathlib import Path
from typing import Dict, List, Tuple

import examples
from rspin_disks.graph import emit_graph
from rspin_disks.sections import random_configuration
from rspin_disks.strata import random_graph

VALID_BUILDERS = (
    examples.two_disk_r3,
    examples.ramond_boundary_r3,
    examples.contracted_boundary_r3,
    examples.open_closed_ramond_r3,
    examples.open_closed_ns_r3,
    examples.two_disk_r2,
    examples.three_disk_chain_r2,
)


def write_corpus(root: Path, n_random: int = 40, seed: int = 0) -> Dict[str, List[Tuple[Path, object]]]:
    """Write valid graphs, invalid-but-parsable graphs, malformed documents and section
    configurations under root; return them grouped by kind."""
    root.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    out: Dict[str, List[Tuple[Path, object]]] = {"valid": [], "invalid": [], "malformed": [], "config": []}
    graphs = [f() for f in VALID_BUILDERS] + [random_graph(rng) for _ in range(n_random)]
    for i, g in enumerate(graphs):
        p = root / f"valid_{i:03d}.json"
        p.write_text(json.dumps(emit_graph(g)))
        out["valid"].append((p, g))

    bad = emit_graph(examples.two_disk_r3(alt_h1=1))
    p = root / "invalid_parity.json"
    p.write_text(json.dumps(bad))
    out["invalid"].append((p, None))
    doc = emit_graph(examples.two_disk_r3())
    for h in doc["half_edges"]:
        if h["id"] == "h1":
            h["tw"] = -1
    p = root / "invalid_twist.json"
    p.write_text(json.dumps(doc))
    out["invalid"].append((p, None))

    p = root / "malformed_json.json"
    p.write_text("{not json")
    out["malformed"].append((p, None))
    doc = emit_graph(examples.two_disk_r3())
    doc["half_edges"][0]["tw"] = "zero"
    p = root / "malformed_schema.json"
    p.write_text(json.dumps(doc))
    out["malformed"].append((p, None))
    doc = emit_graph(examples.two_disk_r3())
    doc["r"] = 1
    p = root / "malformed_r.json"
    p.write_text(json.dumps(doc))
    out["malformed"].append((p, None))

    for i in range(6):
        c = random_configuration(rng, rng.randint(2, 5), rng.randint(2, 5))
        p = root / f"config_{i}.json"
        p.write_text(json.dumps(c.to_json()))
        out["config"].append((p, c))
    return out
