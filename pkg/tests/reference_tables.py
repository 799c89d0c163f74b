"""Two-significant-figure reference values for the 12-row sine and cosine grids.

Each row: (kappa1, kappa2, assoc, rho_approx, rho_js, rho_fl, var_theta,
(rho_js_hat, se), (rho_fl_hat, se), (var_hat, se)).
"""

SINE_ROWS = [
    (1, 1, 0.5, 0.5, 0.22, 0.078, 0.56, (0.22, 0.0089), (0.079, 0.0038), (0.56, 0.0066)),
    (1, 1, -0.5, -0.5, -0.22, -0.078, 0.56, (-0.22, 0.0089), (-0.078, 0.0038), (0.56, 0.0060)),
    (1, 1, 2, 2, 0.70, 0.23, 0.62, (0.70, 0.0049), (0.23, 0.0077), (0.62, 0.0064)),
    (1, 1, -2, -2, -0.70, -0.23, 0.62, (-0.70, 0.0049), (-0.23, 0.0069), (0.63, 0.0060)),
    (0.1, 0.1, 0.05, 0.5, 0.025, 0.00012, 0.95, (0.024, 0.010), (0.00010, 0.00026), (0.95, 0.0070)),
    (0.1, 0.1, -0.05, -0.5, -0.025, -0.00012, 0.95, (-0.025, 0.010), (-0.000092, 0.00030), (0.95, 0.0072)),
    (0.1, 0.1, 0.2, 2, 0.10, 0.00054, 0.95, (0.097, 0.0094), (0.00039, 0.0010), (0.95, 0.0069)),
    (0.1, 0.1, -0.2, -2, -0.10, -0.00054, 0.95, (-0.098, 0.011), (-0.00041, 0.0010), (0.95, 0.0071)),
    (10, 10, 5, 0.5, 0.46, 0.46, 0.064, (0.46, 0.0080), (0.46, 0.0079), (0.064, 0.00088)),
    (10, 10, -5, -0.5, -0.46, -0.46, 0.064, (-0.46, 0.0073), (-0.45, 0.0073), (0.064, 0.00097)),
    (10, 10, 20, 2, 0.98, 0.89, 0.49, (0.98, 0.00030), (0.89, 0.0017), (0.49, 0.0020)),
    (10, 10, -20, -2, -0.98, -0.89, 0.49, (-0.98, 0.00030), (-0.89, 0.0017), (0.49, 0.0021)),
]

COSINE_ROWS = [
    (1, 1, 0.5, 0.33, 0.21, 0.12, 0.48, (0.21, 0.0098), (0.12, 0.0056), (0.48, 0.0057)),
    (1, 1, -0.5, -1, -0.22, -0.025, 0.64, (-0.22, 0.010), (-0.025, 0.0026), (0.64, 0.0061)),
    (1, 1, 2, 0.67, 0.61, 0.52, 0.37, (0.61, 0.0062), (0.52, 0.0057), (0.37, 0.0050)),
    (1, 1, -2, -2, -0.68, 0.37, 0.84, (-0.68, 0.0071), (0.37, 0.0062), (0.84, 0.0065)),
    (0.1, 0.1, 0.05, 0.33, 0.025, 0.00075, 0.95, (0.024, 0.011), (0.00068, 0.00036), (0.95, 0.0065)),
    (0.1, 0.1, -0.05, -1, -0.025, 0.00049, 0.95, (-0.025, 0.011), (0.00054, 0.00039), (0.95, 0.0072)),
    (0.1, 0.1, 0.2, 0.67, 0.099, 0.010, 0.95, (0.098, 0.010), (0.010, 0.0013), (0.95, 0.0068)),
    (0.1, 0.1, -0.2, -2, -0.099, 0.0094, 0.95, (-0.097, 0.012), (0.0095, 0.0015), (0.95, 0.0070)),
    (10, 10, 5, 0.33, 0.33, 0.33, 0.038, (0.33, 0.0083), (0.33, 0.0083), (0.038, 0.00050)),
    (10, 10, -5, -1, -0.65, -0.62, 0.15, (-0.64, 0.0051), (-0.62, 0.0050), (0.15, 0.0019)),
    (10, 10, 20, 0.67, 0.67, 0.67, 0.030, (0.67, 0.0051), (0.67, 0.0051), (0.030, 0.00044)),
    (10, 10, -20, -2, -0.97, 0.61, 0.81, (-0.97, 0.0017), (0.60, 0.0061), (0.81, 0.0053)),
]
