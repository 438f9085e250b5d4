HERMITICITY_TOL = 1e-10     # max-abs of M - M^dagger
PSD_TOL = 1e-9              # eigenvalues in [-PSD_TOL, 0) are clamped to 0
RANK_TOL = 1e-10            # singular values relative to the largest
PROBABILITY_FLOOR = 1e-15   # MLE model probabilities
TIE_TOL = 1e-9              # decoded mixture weights closer than this tie
MAX_KRON_DIM = 2 ** 16      # bound on rows/cols of Kronecker products
DEFAULT_GRID_POINTS = 101
DEFAULT_SEED = 42
SEED_ENV_VAR = 'NMLAB_SEED'

# [R, G, B] of the four base colors, in encoding order C, M, Y, K
CMYK_RGB = (
    (0, 255, 255),
    (255, 0, 255),
    (255, 255, 0),
    (0, 0, 0),
)
