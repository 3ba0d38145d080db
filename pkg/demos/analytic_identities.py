"""Walk through the closed-form layer: golden-ratio constants and the
mean-field identities behind the analytic exponent estimate.

Run:  python3 demos/analytic_identities.py
"""

from polarperc.golden import (
    PHI,
    PHI_CONJ,
    GoldenConstants,
    ReferenceConstants,
    beta_residue,
    g_func,
    mf_critical_coincidence,
    rho_mf,
)


def main():
    g = GoldenConstants()
    r = ReferenceConstants()

    print("golden ratio phi          =", PHI)
    print("conjugate 1/phi           =", PHI_CONJ)
    print()

    # The mean-field stationary density (2p-1)/p^2 and the fluctuation
    # function g(p) = (1-p)^2/(2p-1) intersect exactly at p = 1/phi, and the
    # common value there is again 1/phi.
    rho, gg = mf_critical_coincidence()
    print("rho_MF(1/phi)             =", rho)
    print("g(1/phi)                  =", gg)
    print("both equal 1/phi          =", PHI_CONJ)
    print()

    # The residue of the derivative ratio at that point is the critical
    # exponent estimate; its reciprocal is the scaling exponent.
    beta = beta_residue(PHI_CONJ)
    print("beta  = rho'/(rho'-g')    =", beta)
    print("       closed form        =", 1.0 / (2.0 + PHI))
    print("mu    = 1/beta = 2 + phi  =", g.mu_analytic)
    print()

    # Proximity to the independent numerical references.
    print("numeric beta reference    =", r.beta_num)
    print("relative gap              =", abs(beta - r.beta_num) / r.beta_num)
    print("numeric mu reference      =", r.mu_num)
    print("relative gap              =", abs(g.mu_analytic - r.mu_num) / r.mu_num)
    print()

    # Sensitivity: the same residue formula evaluated slightly off the
    # golden point moves quickly, which is why the coincidence matters.
    for p in (0.60, PHI_CONJ, 0.63, 0.6447):
        print(f"beta_residue({p:.7f})    = {beta_residue(p):.7f}"
              f"   rho_MF = {rho_mf(p):.5f}   g = {g_func(p):.5f}")


if __name__ == "__main__":
    main()
