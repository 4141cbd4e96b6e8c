"""
Markdown, json and csv writers for the classification, invariant and curvature results.
"""
import json
import os

import numpy as np

from .cohomology import CohomologyReport
from .curvature import ScanRow
from .freeness import Classification, Sp1Pair
from .reps import BiquotientSpec, RepDecomposition, TorusImage, torus_image

TABLE_FILES = (
    "embeddings.md", "torus_images.md", "sp1_homomorphisms.md", "sp1xsp1_homomorphisms.md",
    "differentials.md", "h8_orders.md", "pontryagin.md",
)


def _power(symbol: str, exponent: int) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return symbol
    return f"{symbol}^{exponent}"


def format_entry(row: tuple[int, ...]) -> str:
    """z^a w^b for one diagonal entry; '1' when trivial."""
    return "".join(_power(s, a) for s, a in zip("zw", row)) or "1"


def format_image(image: TorusImage) -> str:
    if image.is_trivial:
        return "I"
    return f"diag({', '.join(format_entry(row) for row in image.rows)})"


def markdown_table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(cell) for cell in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def embeddings_table(specs: list[BiquotientSpec]) -> str:
    rows = [[s.name, *(s.embedding or ("", ""))] for s in specs]
    return "# Biquotients Sp(3)//Sp(1)^2\n\n" + markdown_table(["Name", "Left factor image", "Right factor image"], rows)


def torus_images_table(classes: list[Classification]) -> str:
    rows = [[c.spec.name, format_image(c.spec.left), format_image(c.spec.right), c.verdict.status.value,
             "homogeneous" if c.homogeneous else "inhomogeneous"] for c in classes]
    header = ["Name", "Left factor image", "Right factor image", "Status", "Type"]
    return "# Image of the maximal torus for the effectively free actions\n\n" + markdown_table(header, rows)


def homomorphisms_table(title: str, reps: list[RepDecomposition]) -> str:
    rows = [[rep.label, format_image(torus_image(rep))] for rep in reps]
    return f"# {title}\n\n" + markdown_table(["Representation", "Image of the maximal torus"], rows)


def sp1_pairs_section(pairs: list[Sp1Pair]) -> str:
    rows = [["(%s, %s)" % p.labels, p.verdict.status.value] for p in pairs]
    return "\n## Pairs defining inhomogeneous effectively free actions\n\n" + markdown_table(["Pair", "Status"], rows)


def differentials_table(reports: list[CohomologyReport]) -> str:
    rows = [[r.name, str(r.dx3), str(r.dx7)] for r in reports]
    return "# Differentials dx3 and dx7\n\n" + markdown_table(["Name", "dx3", "dx7"], rows)


def h8_table(reports: list[CohomologyReport]) -> str:
    rows = [[r.name, r.h8_order, " ".join(map(str, r.snf_divisors))] for r in reports if r.h8_order is not None]
    return "# Order of H^8\n\n" + markdown_table(["Name", "|H^8|", "Smith normal form"], rows)


def pontryagin_table(reports: list[CohomologyReport]) -> str:
    rows = [[r.name, r.p1, r.pi2] for r in reports]
    return "# First Pontryagin class\n\n" + markdown_table(["Name", "p1", "pi2"], rows)


def invariants_table(reports: list[CohomologyReport]) -> str:
    rows = [[r.name, str(r.dx3), str(r.dx7), "" if r.h8_order is None else r.h8_order, r.p1, r.pi2] for r in reports]
    header = ["Name", "dx3", "dx7", "|H^8|", "p1", "pi2"]
    return "# Cohomological invariants\n\n" + markdown_table(header, rows)


def curvature_table(rows: list[ScanRow]) -> str:
    body = [[r.spec, f"{r.theta:.6f}", f"{r.min_defect:.3e}", r.verdict, "yes" if r.converged else "no",
             f"{r.gram:.3f}"] for r in rows]
    header = ["Name", "theta", "min defect", "verdict", "converged", "Gram"]
    return "# Curvature verification\n\n" + markdown_table(header, body)


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as file:
        file.write(text)


def write_json(path: str, data) -> None:
    with open(path, "w", encoding="utf-8") as file:
        json.dump(data, file, indent=2)
        file.write("\n")


def write_scan_csv(path: str, rows: list[ScanRow]) -> None:
    """
    Scan rows as csv, one line per (spec, theta).

    The argmin column holds the coordinates a, then b, of the best pair in the horizontal basis,
    separated by spaces.
    """
    data = np.array([[r.spec, f"{r.theta:1.9f}", f"{r.min_defect:1.6e}", str(int(r.converged)), f"{r.gram:1.6f}",
                      " ".join(f"{v:1.9e}" for v in np.ravel(r.argmin))] for r in rows], dtype=str).reshape(-1, 6)
    np.savetxt(path, data, fmt='%s', delimiter=',', header='spec, theta (rad), min defect, converged, gram, argmin')


def write_tables(export_path: str, tables: dict[str, str]) -> list[str]:
    """Writes {filename: markdown} into export_path and returns the written paths."""
    os.makedirs(export_path, exist_ok=True)
    paths = []
    for filename, text in tables.items():
        path = os.path.join(export_path, filename)
        write_text(path, text)
        paths.append(path)
    return paths
