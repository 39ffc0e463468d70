"""Build the local triple for sl2 on a small window and print its invariants."""

import random

from hmtriple import ExpansionWindow, LocalTripleContext, builtin_sl2, manin_triple_report
from hmtriple.adelic import adelic_cohomology, build_adelic
from hmtriple.tw import cohomology_ranks

L = builtin_sl2()
window = ExpansionWindow.square(2)
ctx = LocalTripleContext(L, window)

for model in (ctx.gD, ctx.gDx, ctx.gm):
    tw = cohomology_ranks(model.assignment, window, L)
    ad = adelic_cohomology(build_adelic(model.assignment, window), L)
    print(f"{model.name:8} TW {tw}  adelic {ad}")

report = manin_triple_report("local", ctx, random.Random(1), samples=20)
for cond in report.conditions:
    print(cond.as_dict())
print("all four conditions hold:", report.passed)
