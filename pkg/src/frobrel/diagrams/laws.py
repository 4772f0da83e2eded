"""The axioms of a ternary structure written as diagram equations."""

import numpy as np

from .semantics import evaluate, evaluate_batch, to_graph

L_A = "(cup * id- * id+) ; (id- * mu3)"
R_A = "(id+ * id- * cupx) ; (mu3 * id-)"
LEFT_LOOP = "(cupx * id+) ; mu3"
RIGHT_LOOP = "(id+ * cup) ; mu3"

# name -> list of (lhs, rhs, commutative mode); a flag holds when every pair agrees
LAWS = {
    "assoc": [("(mu3 * id- * id+) ; mu3", "(id+ * id- * mu3) ; mu3", False)],
    "dagger_symmetric": [
        ("(id+ * (cup ; (id- * cupx * id+))) ; (mu3 * id- * id+)", "comu3", False),
        ("((cupx ; (id+ * cup * id-)) * id+) ; (id+ * id- * mu3)", "comu3", False),
    ],
    "normal": [(LEFT_LOOP, "id+", False), (RIGHT_LOOP, "id+", False)],
    "left_idempotent": [(f"{L_A} ; {L_A}", L_A, False)],
    "right_idempotent": [(f"{R_A} ; {R_A}", R_A, False)],
    "commutative": [
        ("(swap(+,-) * id+) ; (id- * swap(+,+)) ; (swap(-,+) * id+) ; mu3", "mu3", True)
    ],
    "sliding": [
        (f"(({RIGHT_LOOP}) * id- * id+) ; mu3", f"mu3 ; {RIGHT_LOOP}", False),
        (f"(id+ * id- * ({LEFT_LOOP})) ; mu3", f"mu3 ; {LEFT_LOOP}", False),
    ],
}


def sliding_equations(t):
    """Evaluated (lhs, rhs) relation pairs of the two sliding equations."""
    return [(evaluate(a, t), evaluate(b, t)) for a, b, _ in LAWS["sliding"]]


def law_flags_batch(L, names=None):
    """Evaluate the diagram laws on a batch L (N, n, n, n, n); returns name -> (N,) bool."""
    L = np.asarray(L, dtype=bool)
    out = {}
    for name in names or LAWS:
        ok = np.ones(L.shape[0], dtype=bool)
        for lhs, rhs, comm in LAWS[name]:
            a = evaluate_batch(to_graph(lhs, comm), L)
            b = evaluate_batch(to_graph(rhs, comm), L)
            ok &= (a == b).reshape(len(L), -1).all(axis=1)
        out[name] = ok
    return out
