import numpy as np


def random_ball_points(rng, count, n=2, radius=0.95):
    """Points spread over the ball of the given radius in C^n."""
    g = rng.standard_normal((count, 2 * n))
    z = g[:, :n] + 1j * g[:, n:]
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z * radius * rng.uniform(0, 1, size=(count, 1)) ** (1 / (2 * n))


def random_vectors(rng, count, n=2):
    g = rng.standard_normal((count, 2 * n))
    return g[:, :n] + 1j * g[:, n:]


def random_unitary(rng, n=2):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
