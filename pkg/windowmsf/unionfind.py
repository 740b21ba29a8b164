from typing import Dict, Hashable


class DisjointSet:
    """Union-find over arbitrary hashable items, created on first use."""

    def __init__(self):
        self.parent: Dict[Hashable, Hashable] = {}
        self.size: Dict[Hashable, int] = {}

    def add(self, k: Hashable) -> Hashable:
        if k not in self.parent:
            self.parent[k] = k
            self.size[k] = 1
        return k

    def find(self, k: Hashable) -> Hashable:
        self.add(k)

        # Find the root.
        root = k
        while root != self.parent[root]:
            root = self.parent[root]

        # Path compression.
        node = k
        while node != root:
            self.parent[node], node = root, self.parent[node]

        return root

    def union(self, a: Hashable, b: Hashable) -> bool:
        """Merge the sets of a and b; False if they were already one set."""
        root_a = self.find(a)
        root_b = self.find(b)
        if root_a == root_b:
            return False
        if self.size[root_a] < self.size[root_b]:
            root_a, root_b = root_b, root_a
        self.parent[root_b] = root_a
        self.size[root_a] += self.size[root_b]
        return True

    def connected(self, a: Hashable, b: Hashable) -> bool:
        return self.find(a) == self.find(b)
