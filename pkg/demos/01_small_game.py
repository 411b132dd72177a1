"""Solve a small game end to end and look inside the answer.

Three battlefields, A has 5 troops and B has 4. We build the compact
program, solve it, split the optimal flow back into pure strategies and
check the result against a best response of the opponent.
"""

from blotto import GameSpec, solve_game
from blotto.oracle import matrix_game_value

spec = GameSpec.auctionary(3, 5, 4)
result = solve_game(spec)

rows, cols = result.blp.lp.num_rows, result.blp.lp.num_cols
print(f"program size: {rows} rows x {cols} columns")
print(f"guaranteed payoff of A: {result.value:.6f}")

# Brute force over every pure strategy gives the same number.
print(f"matrix-game value:      {matrix_game_value(spec)[0]:.6f}")

print("\nmaxmin strategy of A (allocation -> probability):")
for pure, prob in result.strategy.support:
    print(f"  {pure.allocation}  {prob:.4f}")

print("\nmarginal probability of sending j troops to each battlefield:")
for k, row in enumerate(result.marginals.p, start=1):
    print(f"  field {k}: " + " ".join(f"{x:.3f}" for x in row))

# The certificate is an exact best response of B against these marginals.
print("\n" + result.certificate.describe())
