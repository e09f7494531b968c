"""Central table of numeric tolerances.

Every hard-coded comparison threshold in the package lives here so that the
accuracy contract of each layer is visible in one place.  Values are absolute
unless noted otherwise.
"""

# State and operator validity
UNIT_NORM = 1e-12          # |norm - 1| for state vectors
HERMITICITY = 1e-12        # max |M - M^dag| for Hermitian inputs
TRACE_ONE = 1e-12          # |tr(rho) - 1| for density matrices
EIGENVALUE_FLOOR = -1e-10  # smallest admissible density-matrix eigenvalue
UNITARITY = 1e-10          # max |U^dag U - I|
IMAG_RESIDUE = 1e-10       # imaginary part tolerated (and discarded) in real expectations

# Real/imaginary Hamiltonian split and ancilla embedding
SPLIT_HERMITICITY = 1e-10  # Hermiticity tolerance accepted by the splitter
DECODE_NORM = 1e-9         # norm deviation beyond which decoding is rejected
EQS_VS_DIRECT = 1e-10      # enlarged-space extraction vs literal anti-linear bracket
DYNAMICS_EQUIV = 1e-9      # decode(evolve(embed)) vs direct evolution

# Gate level
CIRCUIT_EQUIV = 1e-9       # circuit unitary vs Hamiltonian exponential
CNOT_FIDELITY_GAP = 1e-10  # 1 - fidelity allowed for the CNOT decomposition
READOUT_EQUIV = 1e-10      # readout-plan expectation transport

# Pulse level
SEQUENCE_EQUIV = 1e-6      # pulse-sequence state vs gate-circuit state
REFOCUS_EQUIV = 1e-8       # refocused coupling block vs ideal ZZ evolution

# Optimal control
GRADIENT_REL = 1e-5        # analytic vs finite-difference gradient, relative

# Statistics
GAUSSIAN_95_QUANTILE = 1.959964  # two-sided 95% quantile of the standard normal
