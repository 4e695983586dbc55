"""
su11sim - spectrally multimode integrated SU(1,1) interferometer simulator

Builds joint spectral amplitudes of a two-section poled waveguide, Schmidt
decomposes them and turns the spectra into photon statistics and phase
sensitivities for vacuum, single-photon and coherent seeds.
"""

__version__ = "0.1.0"
