"""Regenerate src/meritds/data/reduction_polys.json.

One primitive reduction polynomial per (p, k) with k >= 2 and p**k <= 2**24,
chosen as the first hit of find_primitive_poly.  The output is checked in so
that field construction never searches at runtime.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from meritds.ff import DEFAULT_CAP, find_primitive_poly, is_prime  # noqa: E402


def main() -> None:
    entries = []
    for p in range(2, 1 << 12 + 1):
        if not is_prime(p) or p * p > DEFAULT_CAP:
            continue
        k = 2
        while p**k <= DEFAULT_CAP:
            entries.append({"p": p, "k": k, "poly": find_primitive_poly(p, k)})
            k += 1
    out = Path(__file__).resolve().parents[1] / "src/meritds/data/reduction_polys.json"
    out.write_text(json.dumps({"cap": DEFAULT_CAP, "polys": entries}, separators=(",", ":")) + "\n")
    print(f"wrote {len(entries)} polynomials to {out}")


if __name__ == "__main__":
    main()
