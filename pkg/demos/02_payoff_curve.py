"""How the payoff of A grows with its budget, next to the continuous model.

Six battlefields, B fixed at 10 troops, A ranging from 10 to 66. At A = B the
game is fair; at A = (B+1)K the stronger side wins every field for sure.
The continuous game has payoff K(1 - B/A) while B/A >= 2/K; outside that range
the formula does not apply and the column is left blank.

Takes a few minutes: the larger budgets mean programs with thousands of rows.
Pass a smaller upper budget as the first argument for a quick look.
"""

import sys

from blotto.experiments import NotApplicable, continuous_value, sweep

K, B = 6, 10
top = int(sys.argv[1]) if len(sys.argv) > 1 else 66

print(f"{'A':>3} {'discrete':>9} {'continuous':>10} {'ms':>8}")
for row in sweep(K, B, range(B, top + 1)):
    cont = continuous_value(K, row.A, B)
    shown = " " * 10 if isinstance(cont, NotApplicable) else f"{cont:10.4f}"
    print(f"{row.A:>3} {row.value:9.4f} {shown} {row.time_ms:8.1f}")
