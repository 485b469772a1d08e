"""Fault injection for the stack traversal."""

from krabcg.krab import Traversal


def skipping_traversal(k):
    """A Traversal subclass whose first ``k`` non-root returns leave their
    frame on the stack instead of popping it."""

    class SkippingTraversal(Traversal):
        remaining = k

        def pop(self, index):
            if index > 0 and self.remaining > 0:
                self.remaining -= 1
                frame = self.state.stack[index]
                frame.returned = True
                return frame
            return super().pop(index)

    return SkippingTraversal
