"""The three classifiers: SVM, random forest, and bagging over unlabeled draws."""

from __future__ import annotations

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.svm import SVC

MODEL_NAMES = ("svm", "rf", "bagging-pu")


class PuBaggingClassifier:
    """Bagging ensemble for positive-unlabeled data.

    Each bag trains one forest on every positive row plus a
    with-replacement draw of unlabeled rows of the same size, so every
    member sees a balanced binary problem. Prediction averages the
    members' positive-class probabilities and thresholds at 0.5.
    """

    def __init__(self, trees: int = 1000, bags: int = 10, seed: int = 0):
        if trees < 1:
            raise ValueError(f"trees must be >= 1, got {trees}")
        if bags < 1:
            raise ValueError(f"bags must be >= 1, got {bags}")
        self.trees = trees
        self.bags = bags
        self.seed = seed
        self.members_: list[RandomForestClassifier] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "PuBaggingClassifier":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        positives = X[y == 1]
        unlabeled = X[y == 0]
        if positives.shape[0] == 0 or unlabeled.shape[0] == 0:
            raise ValueError("training data must contain both positive and unlabeled rows")
        rng = np.random.default_rng(self.seed)
        member_seeds = rng.integers(0, 2**31 - 1, size=self.bags)
        self.members_ = []
        for bag in range(self.bags):
            draw = rng.integers(0, unlabeled.shape[0], size=positives.shape[0])
            bag_X = np.vstack([positives, unlabeled[draw]])
            bag_y = np.concatenate(
                [np.ones(positives.shape[0], dtype=int), np.zeros(positives.shape[0], dtype=int)]
            )
            member = RandomForestClassifier(
                n_estimators=self.trees, random_state=int(member_seeds[bag])
            )
            member.fit(bag_X, bag_y)
            self.members_.append(member)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if not self.members_:
            raise ValueError("classifier is not fitted")
        X = np.asarray(X, dtype=float)
        total = np.zeros((X.shape[0], 2), dtype=float)
        for member in self.members_:
            proba = member.predict_proba(X)
            for column, label in enumerate(member.classes_):
                total[:, int(label)] += proba[:, column]
        return total / len(self.members_)

    def predict(self, X: np.ndarray) -> np.ndarray:
        proba = self.predict_proba(X)
        return (proba[:, 1] >= 0.5).astype(int)


def build_model(name: str, trees: int, seed: int):
    if name == "svm":
        return SVC(kernel="rbf", C=1.0, gamma="scale", random_state=seed)
    if name == "rf":
        return RandomForestClassifier(n_estimators=trees, random_state=seed)
    if name == "bagging-pu":
        return PuBaggingClassifier(trees=trees, seed=seed)
    raise ValueError(f"unknown classifier {name!r}; expected one of {MODEL_NAMES}")
