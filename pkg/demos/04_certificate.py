"""The inductive certificate for bases of large primes.

Run: python demos/04_certificate.py
"""
from coverings import CertificateParams, certify

# %% Default run: primes > 19, third moment, e^lambda = 2, pi_good = 1/2
report = certify(CertificateParams())
print(report.to_text())

# %% Which lower cutoffs certify with the same parameters?
for q0 in (11, 13, 17, 19, 23):
    r = certify(CertificateParams.for_q0(q0))
    print(f"q0 = {q0:>2}: {r.verdict}")

# %% A squarefree restriction (v = 1) lowers the bias bounds
r = certify(CertificateParams.for_q0(19, v=1))
print("squarefree beta_3(0) <=", r.beta0.value, "|", r.verdict)

# %% Numerical probe of the growth comparison just past the checked range
r = certify(CertificateParams(i_max=8, probe_steps=1))
print(r.probes)
