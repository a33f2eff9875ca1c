"""Exercise the rule-based fertilizer recommender.

Reads the bundled per-crop ideal N/P/K table and walks a handful of soil
scenarios through the rules, including the tie-break and the BALANCED
outcome.
"""

from pathlib import Path

from agroml.fertilizer import load_advice_catalog, load_ideal_table, recommend_fertilizer

DATA = Path(__file__).resolve().parent.parent / "data"

table = load_ideal_table(DATA / "fertilizer.csv")
advice = load_advice_catalog(DATA / "fertilizer_advice.json")

print(f"ideal table: {len(table)} crops -> {', '.join(table.names()[:6])}, ...")
print()

scenarios = [
    ("rice", 80, 40, 40, "soil exactly at the ideal"),
    ("rice", 50, 40, 40, "nitrogen 30 short"),
    ("rice", 80, 40, 90, "potassium 50 over"),
    ("coffee", 100, 60, 30, "phosphorus heavy"),
    ("banana", 160, 75, 50, "nitrogen heavy"),
    ("rice", 73, 33, 33, "three-way tie: N wins by priority"),
]

for crop, n, p, k, note in scenarios:
    rec = recommend_fertilizer(table, crop, n, p, k, advice)
    print(f"{crop:<8} soil N/P/K = {n:>3}/{p:>3}/{k:>3}   [{note}]")
    print(f"  -> {rec.klass:<9} nutrient={rec.nutrient or '-'} deviation={rec.deviation:+.0f}")
    print(f"     {rec.advice}")
    print()

try:
    recommend_fertilizer(table, "dragonfruit", 10, 10, 10, advice)
except Exception as exc:
    print(f"unknown crop behaves like: {exc}")
