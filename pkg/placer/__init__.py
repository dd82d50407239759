# Nonsmooth penalty global placement: RBSM solver, legalizer and GSRC harness
