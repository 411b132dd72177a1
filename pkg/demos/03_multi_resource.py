"""Two kinds of resources, won by majority.

Each player splits a budget of two resource types over the battlefields. A
battlefield goes to whoever is ahead on more resource types. Strategies are
paths in a graph whose vertices are vectors of spent resources, so the same
flow machinery applies.
"""

from blotto.mrcb import MrcbSpec, mrcb_matrix_game_value, solve_mrcb

for budgets_a, budgets_b in [((2, 2), (2, 2)), ((2, 1), (1, 1)), ((3, 0), (1, 2))]:
    spec = MrcbSpec.majority(2, budgets_a, budgets_b)
    result = solve_mrcb(spec)
    print(f"A {budgets_a} vs B {budgets_b}: value {result.value:+.4f} "
          f"(brute force {mrcb_matrix_game_value(spec):+.4f}), certified={result.passed}")
    for alloc, prob in result.support:
        print(f"    {alloc}  {prob:.3f}")
