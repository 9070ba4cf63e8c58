"""Exception types shared across the library."""


class SncError(Exception):
    """Base class for all library errors."""


class SelfLoop(SncError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"self-loop on node {node}")


class ZeroWeight(SncError):
    def __init__(self, tail, head):
        self.tail = tail
        self.head = head
        super().__init__(f"zero weight on link ({tail}, {head})")


class DuplicateEdge(SncError):
    def __init__(self, tail, head):
        self.tail = tail
        self.head = head
        super().__init__(f"duplicate link ({tail}, {head})")


class NodeOutOfRange(SncError):
    def __init__(self, node, n):
        self.node = node
        self.n = n
        super().__init__(f"node {node} out of range 0..{n - 1}")


class EmptySubset(SncError):
    pass


class LengthMismatch(SncError):
    pass


class CapExceeded(SncError):
    def __init__(self, n, cap):
        self.n = n
        self.cap = cap
        super().__init__(f"size {n} exceeds cap {cap}")


class NotUndirected(SncError):
    pass


class NotUnsigned(SncError):
    pass


class UnknownFixture(SncError):
    pass


class DocumentError(SncError):
    """Schema or semantic violation in a game document.

    `path` is a JSON-path-like locator of the offending element.
    """

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
