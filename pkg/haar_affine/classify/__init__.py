# Spectra and basisness verdicts
