# coding=utf-8
"""
This module contains the numpy learners: a one-vs-rest linear SVM, a one-hidden-layer MLP and a single-layer 1-D
CNN, each with a loss-and-gradient function that training and the gradient checks share.
"""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import collections

# Third-party imports
import numpy as np

SvmHyper = collections.namedtuple("SvmHyper", ["epochs", "learning_rate", "l2", "batch_size"])
SvmHyper.__new__.__defaults__ = (200, 0.05, 1e-3, 32)

MlpHyper = collections.namedtuple("MlpHyper", ["hidden", "epochs", "learning_rate", "l2", "batch_size"])
MlpHyper.__new__.__defaults__ = (64, 200, 0.05, 1e-4, 32)

CnnHyper = collections.namedtuple("CnnHyper", ["filters", "width", "epochs", "learning_rate", "l2", "batch_size"])
CnnHyper.__new__.__defaults__ = (8, 5, 200, 0.05, 1e-4, 32)


def softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _one_hot(labels, n_classes):
    out = np.zeros((len(labels), n_classes))
    out[np.arange(len(labels)), labels] = 1.0
    return out


def _cross_entropy(probs, labels):
    return -np.mean(np.log(np.maximum(probs[np.arange(len(labels)), labels], 1e-300)))


def _batches(n, batch_size, rng):
    order = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield order[start:start + batch_size]


# Linear SVM


def svm_scores(params, X):
    return X.dot(params["W"]) + params["b"]


def svm_loss_grad(params, X, labels, l2):
    """Mean one-vs-rest hinge loss plus l2/2 |W|^2, and its subgradient."""
    n, n_classes = len(X), params["W"].shape[1]
    targets = 2.0 * _one_hot(labels, n_classes) - 1.0
    margins = targets * svm_scores(params, X)
    active = (margins < 1.0).astype(float)
    loss = np.maximum(0.0, 1.0 - margins).sum() / n + 0.5 * l2 * np.sum(params["W"]**2)
    dscores = -targets * active / n
    return loss, {"W": X.T.dot(dscores) + l2 * params["W"], "b": dscores.sum(axis=0)}


def fit_svm(X, labels, n_classes, hyper, seed):
    rng = np.random.RandomState(seed)
    params = {"W": rng.normal(0.0, 0.01, size=(X.shape[1], n_classes)), "b": np.zeros(n_classes)}
    return _descend(svm_loss_grad, params, X, labels, hyper, rng), hyper


# MLP


def _mlp_forward(params, X):
    hidden_in = X.dot(params["W1"]) + params["b1"]
    hidden = np.maximum(hidden_in, 0.0)
    return hidden_in, hidden, hidden.dot(params["W2"]) + params["b2"]


def mlp_scores(params, X):
    return _mlp_forward(params, X)[2]


def mlp_loss_grad(params, X, labels, l2):
    """Mean softmax cross-entropy plus l2/2 (|W1|^2 + |W2|^2), and its gradient."""
    hidden_in, hidden, logits = _mlp_forward(params, X)
    probs = softmax(logits)
    loss = _cross_entropy(probs, labels) + 0.5 * l2 * (np.sum(params["W1"]**2) + np.sum(params["W2"]**2))

    dlogits = (probs - _one_hot(labels, probs.shape[1])) / len(X)
    dhidden = dlogits.dot(params["W2"].T) * (hidden_in > 0)
    return loss, {
        "W1": X.T.dot(dhidden) + l2 * params["W1"],
        "b1": dhidden.sum(axis=0),
        "W2": hidden.T.dot(dlogits) + l2 * params["W2"],
        "b2": dlogits.sum(axis=0),
    }


def fit_mlp(X, labels, n_classes, hyper, seed):
    rng = np.random.RandomState(seed)
    d = X.shape[1]
    params = {
        "W1": rng.normal(0.0, np.sqrt(2.0 / d), size=(d, hyper.hidden)),
        "b1": np.zeros(hyper.hidden),
        "W2": rng.normal(0.0, np.sqrt(1.0 / hyper.hidden), size=(hyper.hidden, n_classes)),
        "b2": np.zeros(n_classes),
    }
    return _descend(mlp_loss_grad, params, X, labels, hyper, rng), hyper


# 1-D CNN
# Inputs are (series, scalars): series has shape (n, channels, points), scalars (n, s).


def _patches(series, width):
    """(n, positions, channels * width) sliding patches of a valid convolution."""
    positions = series.shape[2] - width + 1
    index = np.arange(positions)[:, None] + np.arange(width)[None, :]
    patches = series[:, :, index]  # n, channels, positions, width
    return patches.transpose(0, 2, 1, 3).reshape(len(series), positions, -1)


def _conv_pool(params, series):
    patches = _patches(series, params["filters"].shape[2])
    kernel = params["filters"].reshape(len(params["filters"]), -1)
    conv = patches.dot(kernel.T) + params["filter_bias"]
    return patches, conv, np.maximum(conv, 0.0).mean(axis=1)


def _cnn_forward(params, series, scalars):
    patches, conv, pooled = _conv_pool(params, series)
    dense_in = np.hstack([pooled, scalars])
    return patches, conv, pooled, dense_in, dense_in.dot(params["W"]) + params["b"]


def cnn_pooled(params, series):
    """Globally average-pooled filter activations of each series."""
    return _conv_pool(params, np.asarray(series, dtype=float))[2]


def cnn_scores(params, inputs):
    series, scalars = inputs
    return _cnn_forward(params, series, scalars)[4]


def cnn_loss_grad(params, inputs, labels, l2):
    """Mean softmax cross-entropy plus l2/2 (|filters|^2 + |W|^2), and its gradient."""
    series, scalars = inputs
    patches, conv, pooled, dense_in, logits = _cnn_forward(params, series, scalars)
    probs = softmax(logits)
    loss = _cross_entropy(probs, labels) + 0.5 * l2 * (np.sum(params["filters"]**2) + np.sum(params["W"]**2))

    n_filters = params["filters"].shape[0]
    dlogits = (probs - _one_hot(labels, probs.shape[1])) / len(labels)
    ddense = dlogits.dot(params["W"].T)
    dconv = ddense[:, None, :n_filters] / conv.shape[1] * (conv > 0)
    dkernel = np.einsum("npf,npk->fk", dconv, patches)
    return loss, {
        "filters": dkernel.reshape(params["filters"].shape) + l2 * params["filters"],
        "filter_bias": dconv.sum(axis=(0, 1)),
        "W": dense_in.T.dot(dlogits) + l2 * params["W"],
        "b": dlogits.sum(axis=0),
    }


def fit_cnn(series, scalars, labels, n_classes, hyper, seed):
    rng = np.random.RandomState(seed)
    channels = series.shape[1]
    fan_in = channels * hyper.width
    params = {
        "filters": rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(hyper.filters, channels, hyper.width)),
        "filter_bias": np.zeros(hyper.filters),
        "W": rng.normal(0.0, np.sqrt(1.0 / (hyper.filters + scalars.shape[1])),
                        size=(hyper.filters + scalars.shape[1], n_classes)),
        "b": np.zeros(n_classes),
    }
    return _descend(cnn_loss_grad, params, (series, scalars), labels, hyper, rng), hyper


def _take(inputs, index):
    if isinstance(inputs, tuple):
        return tuple(part[index] for part in inputs)
    return inputs[index]


def _descend(loss_grad, params, inputs, labels, hyper, rng, history=None):
    """
    Mini-batch gradient descent with a fixed step and epoch budget; the batch order comes from rng. When a
    history list is given, the full-data loss after every epoch is appended to it.
    """
    params = dict((k, v.copy()) for k, v in params.items())
    for _ in range(hyper.epochs):
        for batch in _batches(len(labels), hyper.batch_size, rng):
            _, grads = loss_grad(params, _take(inputs, batch), labels[batch], hyper.l2)
            for key in params:
                params[key] -= hyper.learning_rate * grads[key]
        if history is not None:
            history.append(loss_grad(params, inputs, labels, hyper.l2)[0])
    return params


def loss_history(loss_grad, params, inputs, labels, hyper, seed=0):
    """Full-data loss after each training epoch."""
    history = []
    _descend(loss_grad, params, inputs, labels, hyper, np.random.RandomState(seed), history)
    return history
