"""Regenerate src/pwv/data/k3.json."""

import json
import pathlib

from pwv.k3 import k3_document

out = pathlib.Path(__file__).resolve().parents[1] / "src" / "pwv" / "data" / "k3.json"
doc = k3_document()
# one cup entry per line keeps diffs readable
body = json.dumps({k: v for k, v in doc.items() if k != "cup"}, indent=1, sort_keys=True)
cup = ",\n  ".join(json.dumps(e) for e in doc["cup"])
text = body[:-2] + ',\n "cup": [\n  ' + cup + "\n ]\n}\n"
json.loads(text)
out.write_text(text)
print(f"wrote {out} ({len(doc['cup'])} cup entries)")
