"""Reference systems shared by the unit tests."""

import os

import numpy as np

CONFIG_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                          os.pardir, os.pardir, "configs")

CART_A = [[0.0, 1.0, 0.0, 0.0],
          [0.3920, 0.0, -0.0327, 0.0],
          [0.0, 0.0, 0.0, 1.0],
          [0.0560, 0.0, 0.2753, 0.0]]
CART_B = [[0.0], [-0.0033], [0.0], [-0.0033 / 7.0]]
CART_A2 = [[0.0, 0.9524, 0.0, 0.0],
           [0.392, 0.0, 0.0, 0.0],
           [0.0, 0.1429, 0.0, 1.0500],
           [0.0, 0.0, 0.2800, 0.0]]

SIXD_A = np.array([
    [-0.3557, -0.3078, -0.6097, 2.0275, -1.3636, -0.4131],
    [0.1233, -1.6441, 0.2404, -0.6431, 0.0517, -0.1454],
    [1.8857, -1.1748, -1.2502, -0.7252, -0.7801, -0.3972],
    [-0.0194, -0.0779, -0.0208, 0.0160, -0.0465, 0.0535],
    [-0.0486, -0.0192, 0.0781, 0.1017, 0.0838, -0.0518],
    [0.0043, -0.0849, -0.0228, -0.0901, -0.0319, -0.1143]])
SIXD_B = np.array([
    [1.0720, -0.8153], [-1.7390, -0.7181], [-0.8292, -0.4906],
    [0.0156, 0.0540], [-0.0960, 0.0875], [-0.0347, -0.0054]])
SIXD_A2 = np.array([
    [-0.3472, -0.1553, -0.5243, 0.0, 0.0, 0.0],
    [0.1252, -1.6394, 0.2499, 0.0, 0.0, 0.0],
    [1.8832, -0.9445, -1.1162, 0.0, 0.0, 0.0],
    [0.0069, -0.1476, -0.0544, -0.1011, 0.0244, 0.1152],
    [-0.0523, -0.0749, -0.0097, 0.1474, 0.0156, -0.0571],
    [-0.0015, -0.0604, -0.0238, -0.1425, 0.0200, -0.0762]])

EX4D_A = [[1.5072, 3.3984, 0.1300, -0.0884],
          [5.0644, -2.6683, 0.0227, 0.1689],
          [0.1156, -0.1863, 0.5686, 0.2648],
          [-0.0808, 0.0229, 0.4915, 0.5949]]
EX4D_B = [[-0.7433], [-2.2528], [-0.9075], [0.6036]]

CART_B2 = [0.0, -0.0033, 0.0, 0.0]


def matrix(m):
    m = np.asarray(m, dtype=float)
    return {"rows": m.shape[0], "cols": m.shape[1],
            "data": m.ravel().tolist()}


def config_path(name):
    return os.path.join(CONFIG_DIR, name)
