"""Print brute-force codimension tables next to their closed forms."""
import argparse

from hermikron.bundles import codim_closed_form, enumerate_bounded, enumerate_regular
from hermikron.codim import descriptor_codim, verify_block_tables


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--nmax", type=int, default=6)
    args = ap.parse_args()

    bad = 0
    for c in verify_block_tables(args.kmax):
        bad += not c["ok"]
        print(f"{c['check']:<28} got {c['got']:>3}  want {c['want']:>3}")
    for n in range(1, args.nmax + 1):
        for r in range(1, n + 1):
            descs = enumerate_regular(n) if r == n else enumerate_bounded(n, r)
            for desc in descs:
                res, cf = descriptor_codim(desc), codim_closed_form(desc)
                ok = (res.orbit_codim, res.bundle_codim) == (cf["orbit"], cf["bundle"])
                bad += not ok
                print(f"n={n} r={r} c={desc.c} d={desc.d}: orbit {res.orbit_codim} "
                      f"bundle {res.bundle_codim} {'ok' if ok else 'MISMATCH'}")
    print("all agree" if bad == 0 else f"{bad} mismatches")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
