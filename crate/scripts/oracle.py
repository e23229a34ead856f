#!/usr/bin/env python3
"""Independent high-precision evaluation of the bundled example scenario.

Values printed here are frozen into the Rust regression tests. The script
only uses mpmath and the closed-form physics; the water-filling power
fraction is found by golden-section search on the total rate, not by the
closed-form expression the library uses.

    python3 scripts/oracle.py
"""

import mpmath as mp

mp.mp.dps = 40

C = mp.mpf(299792458)
KB = mp.mpf("1.380649e-23")

B = mp.mpf(5e6)
FC = mp.mpf(3e9)
TEMP = mp.mpf(1000)
R_COMMS = mp.mpf(10e3)
P_COM = mp.mpf(10) ** ((mp.mpf(20) - 30) / 10)
G_COMMS = mp.mpf(1)
R_TARGET = mp.mpf(100e3)
G_RADAR = mp.mpf(10) ** (mp.mpf(30) / 10)
P_RADAR = mp.mpf(1000)
RCS = mp.mpf(10)
RANGE_STD = mp.mpf(100)
TB = mp.mpf(100)
DUTY = mp.mpf("0.01")

lam = C / FC
a_sq = G_RADAR**2 * lam**2 * RCS / ((4 * mp.pi) ** 3 * R_TARGET**4)
b_sq = G_COMMS**2 * lam**2 / (4 * mp.pi * R_COMMS) ** 2
noise = KB * TEMP * B
gamma_sq = (2 * mp.pi) ** 2 / 12
sig_proc = (2 * RANGE_STD / C) ** 2
crb = KB * TEMP / (gamma_sq * B * TB * a_sq * P_RADAR)
t_pulse = TB / B
r_est = DUTY / t_pulse * mp.log(1 + sig_proc / crb, 2)
r_com = B * mp.log(1 + b_sq * P_COM / noise, 2)
int_n = P_RADAR * a_sq * gamma_sq * B**2 * sig_proc + noise
r_sic = B * mp.log(1 + b_sq * P_COM / int_n, 2)


def channels(alpha):
    mu_com = b_sq / (KB * TEMP * alpha * B)
    mu_mix = b_sq / (a_sq * P_RADAR * (1 - alpha) ** 2 * gamma_sq * B**2 * sig_proc
                     + KB * TEMP * (1 - alpha) * B)
    return mu_com, mu_mix


def total_rate(alpha, beta):
    mu_com, mu_mix = channels(alpha)
    return (alpha * B * mp.log(1 + beta * P_COM * mu_com, 2)
            + (1 - alpha) * B * mp.log(1 + (1 - beta) * P_COM * mu_mix, 2))


def best_beta(alpha):
    lo, hi = mp.mpf(0), mp.mpf(1)
    g = (mp.sqrt(5) - 1) / 2
    for _ in range(200):
        x1 = hi - g * (hi - lo)
        x2 = lo + g * (hi - lo)
        if total_rate(alpha, x1) < total_rate(alpha, x2):
            lo = x1
        else:
            hi = x2
    return (lo + hi) / 2


def est_rate(alpha, kappa=TB):
    snr = sig_proc * gamma_sq * (1 - alpha) * B * kappa * a_sq * P_RADAR / (KB * TEMP)
    return (1 - alpha) * B * DUTY / kappa * mp.log(1 + snr, 2)


def show(name, v):
    print(f"{name:>28} = {mp.nstr(v, 17)}")


show("wavelength_m", lam)
show("a_sq", a_sq)
show("b_sq", b_sq)
show("noise_power_w", noise)
show("sigma_tau_proc_sq", sig_proc)
show("crb_delay_variance", crb)
show("crb_range_sigma_m", mp.sqrt(crb) * C / 2)
show("isnr", TB * a_sq * P_RADAR / noise)
show("est_outer_rate", r_est)
show("comms_outer_rate", r_com)
show("int_plus_noise_full", int_n)
show("sic_comms_rate", r_sic)

mu_com, mu_mix = channels(mp.mpf("0.5"))
show("mu_com(0.5)", mu_com)
show("mu_mix(0.5)", mu_mix)
for alpha in ["0.1", "0.25", "0.5", "0.75", "0.9"]:
    a = mp.mpf(alpha)
    beta = best_beta(a)
    mc, mm = channels(a)
    rcc = a * B * mp.log(1 + beta * P_COM * mc, 2)
    rcm = (1 - a) * B * mp.log(1 + (1 - beta) * P_COM * mm, 2)
    print(f"alpha={alpha}: beta={mp.nstr(beta, 17)} r_com_com={mp.nstr(rcc, 17)} "
          f"r_com_mix={mp.nstr(rcm, 17)} r_est={mp.nstr(est_rate(a), 17)}")
