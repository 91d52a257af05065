#!/usr/bin/env python3
"""Search for integer loan ceilings that reproduce the expected
first_that_can_supply_wants column for the loans fixture.

Inputs held fixed: want = 15,25,45,65,85,12,12,12,12,12,blank,blank;
initial_loan = 0 and has_ceiling = true for every loan.

If a ceiling vector reproduces the target column, every loan balance is
determined by the target (the selected loan lends the wanted amount), so
each loan's ceiling can be screened on its own. Every combination of the
screened candidates is then checked by a full independent simulation and
the lexicographically smallest survivor is reported.
"""
import itertools

WANT = [15, 25, 45, 65, 85, 12, 12, 12, 12, 12, 0, 0]
TARGET = [1, 2, 3, 4, None, 2, 3, 4, None, None, 1, 1]
LOANS = 4
SEARCH = range(0, 201)


def simulate(ceilings):
    balance = [0] * LOANS
    first = []
    for want in WANT:
        pick = None
        for l in range(LOANS):
            if want + balance[l] <= ceilings[l]:
                pick = l
                break
        first.append(None if pick is None else pick + 1)
        if pick is not None:
            balance[pick] += want
    return first


def balances_from_target():
    balance = [0] * LOANS
    starts = []
    for want, pick in zip(WANT, TARGET):
        starts.append(list(balance))
        if pick is not None:
            balance[pick - 1] += want
    return starts


def screen(loan, starts):
    ok = []
    for c in SEARCH:
        good = True
        for t, (want, pick) in enumerate(zip(WANT, TARGET)):
            can = want + starts[t][loan] <= c
            if pick is None or loan + 1 < pick:
                good &= not can
            elif loan + 1 == pick:
                good &= can
        if good:
            ok.append(c)
    return ok


def main():
    starts = balances_from_target()
    candidates = [screen(l, starts) for l in range(LOANS)]
    for l, c in enumerate(candidates, 1):
        print(f"loan {l}: {min(c)}..{max(c)} ({len(c)} values)")
    survivors = [combo for combo in itertools.product(*candidates) if simulate(combo) == TARGET]
    print(f"{len(survivors)} ceiling vectors reproduce the column")
    print("smallest:", ",".join(str(c) for c in min(survivors)))


if __name__ == "__main__":
    main()
