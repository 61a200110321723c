"""Regenerate the golden tables with mpmath at 30 digits.

Values are computed from first principles (direct theta sums, image sums and
adaptive quadrature), independently of the Rust code. Run from the repo root:

    python python/make_golden.py
"""

import csv
import hashlib
import pathlib
import random

import mpmath as mp

mp.mp.dps = 30
OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "revival-core" / "tests" / "golden"


def theta(z, tau):
    z, tau = mp.mpc(z), mp.mpc(tau)
    kmax = int(mp.sqrt(60 * mp.log(10) / (mp.pi * tau.real)) + abs(z.imag) / tau.real + 5)
    return mp.fsum(mp.exp(-mp.pi * tau * k * k + 2j * mp.pi * k * z) for k in range(-kmax, kmax + 1))


def packet(hbar, m, alpha, q, p, x, t):
    g = hbar * t / (2 * m * alpha**2)
    one_ig = mp.mpc(1, g)
    u = x - q - p * t / m
    return (
        (2 * mp.pi * alpha**2) ** mp.mpf(-0.25)
        * mp.exp(-(u**2) / (4 * alpha**2 * one_ig) + 1j * p * (x - q - p * t / (2 * m)) / hbar)
        / mp.sqrt(one_ig)
    )


def images(hbar, m, alpha, l, t):
    width = alpha * mp.sqrt(1 + (hbar * t / (2 * m * alpha**2)) ** 2)
    return int(40 * width / (2 * l)) + 4


def circle_state(hbar, m, alpha, l, q, p, t):
    n = images(hbar, m, alpha, l, t) + int(abs(p * t / m) / (2 * l)) + 1
    return lambda x: mp.fsum(packet(hbar, m, alpha, q, p, x - 2 * l * j, t) for j in range(-n, n + 1))


def box_state(hbar, m, alpha, l, q, p, t):
    n = images(hbar, m, alpha, l, t) + int(abs(p * t / m) / (4 * l)) + 1
    return lambda x: mp.fsum(
        packet(hbar, m, alpha, q, p, x - 4 * l * j, t) - packet(hbar, m, alpha, q, p, 4 * l * j + 2 * l - x, t)
        for j in range(-n, n + 1)
    )


def inner(f, g, l, pieces=24):
    nodes = [-l + 2 * l * i / pieces for i in range(pieces + 1)]
    return mp.quad(lambda x: mp.conj(f(x)) * g(x), nodes, method="gauss-legendre")


def fmt(v):
    return format(float(v), ".17g")


def write(name, header, rows):
    path = OUT / name
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])
    return path


def theta_table(rng):
    rows = []
    for _ in range(40):
        z = mp.mpc(rng.uniform(-1.5, 1.5), rng.uniform(-0.8, 0.8))
        tau = mp.mpc(rng.uniform(0.3, 4.0), rng.uniform(-2.0, 2.0))
        v = theta(z, tau)
        rows.append([z.real, z.imag, tau.real, tau.imag, v.real, v.imag])
    return write("theta.csv", ["z_re", "z_im", "tau_re", "tau_im", "theta_re", "theta_im"], rows)


def draw_params(rng):
    return (
        mp.mpf(rng.uniform(0.03, 0.2)),
        mp.mpf(rng.choice([0.5, 1.0, 2.0])),
        mp.mpf(rng.uniform(0.08, 0.22)),
        mp.mpf(1),
    )


def outside_zone(hbar, alpha, l, q, p):
    near_wall = abs(abs(q) - l) < 3 * alpha
    slow = abs(p) < 3 * hbar / alpha
    return not (near_wall and slow)


def overlap_table(rng):
    rows = []
    for domain, make in (("circle", circle_state), ("box", box_state)):
        count = 0
        while count < 12:
            hbar, m, alpha, l = draw_params(rng)
            a = (mp.mpf(rng.uniform(-0.95, 0.95)), mp.mpf(rng.uniform(-1.5, 1.5)))
            b = (mp.mpf(rng.uniform(-0.95, 0.95)), mp.mpf(rng.uniform(-1.5, 1.5)))
            if domain == "box" and not (outside_zone(hbar, alpha, l, *a) and outside_zone(hbar, alpha, l, *b)):
                continue
            t = mp.mpf(rng.choice([0.0, rng.uniform(0.0, 1.5)]))
            fa = make(hbar, m, alpha, l, a[0], a[1], 0)
            fb = make(hbar, m, alpha, l, b[0], b[1], t)
            v = inner(fa, fb, l)
            nrm = inner(fa, fa, l).real
            rows.append([domain, hbar, m, alpha, l, a[0], a[1], b[0], b[1], t, v.real, v.imag, nrm])
            count += 1
    header = ["domain", "hbar", "mass", "alpha", "l", "qa", "pa", "qb", "pb", "t", "overlap_re", "overlap_im", "norm_sq_a"]
    return write("overlaps.csv", header, rows)


def density_table():
    hbar, m, alpha, l = mp.mpf("0.05"), mp.mpf(1), mp.mpf("0.1"), mp.mpf(1)
    q, p = mp.mpf("0.2"), mp.mpf(1)
    xs = [-l + 2 * l * i / 16 for i in range(17)]
    rows = []
    for domain, make, t_rev in (
        ("circle", circle_state, 4 * m * l**2 / (mp.pi * hbar)),
        ("box", box_state, 16 * m * l**2 / (mp.pi * hbar)),
    ):
        for c in ("0", "1/4", "1/3", "1/2", "0.37"):
            t = mp.mpf(mp.fraction(*map(int, c.split("/")))) * t_rev if "/" in c else mp.mpf(c) * t_rev
            f = make(hbar, m, alpha, l, q, p, t)
            for x in xs:
                rows.append([domain, hbar, m, alpha, l, q, p, c, t, x, abs(f(x)) ** 2])
    return write("densities.csv", ["domain", "hbar", "mass", "alpha", "l", "q", "p", "fraction", "t", "x", "density"], rows)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240611)
    paths = [theta_table(rng), overlap_table(rng), density_table()]
    sums = "".join(f"{hashlib.sha256(p.read_bytes()).hexdigest()}  {p.name}\n" for p in paths)
    (OUT / "SHA256SUMS").write_text(sums)
    print(sums, end="")


if __name__ == "__main__":
    main()
