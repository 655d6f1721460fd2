from typing import Dict, Hashable, Iterable, List, Sequence, Tuple


class UnionFind:
    """Partición por unión-búsqueda con compresión de caminos y unión por rango"""

    def __init__(self, X: Iterable[Hashable]):
        self.parent = {x: x for x in X}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def classes(self) -> List[List[Hashable]]:
        """Clases ordenadas internamente y entre sí por su elemento mínimo"""
        groups: Dict[Hashable, List[Hashable]] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return sorted((sorted(c) for c in groups.values()), key=lambda c: c[0])


def find_orbits(
    pairs: Iterable[Tuple[int, int]],
    space: Sequence[int],
) -> Tuple[List[List[int]], List[int]]:
    """
    Órbitas generadas por las aristas x ~ y dadas. Devuelve las clases (la
    mínima primero, cada una con su representante canónico = id mínimo al
    frente) y el mapa elemento -> índice de clase.
    """
    uf = UnionFind(space)
    for x, y in pairs:
        uf.union(x, y)
    classes = uf.classes()
    class_of = [0] * (max(space) + 1 if space else 0)
    for k, members in enumerate(classes):
        for x in members:
            class_of[x] = k
    return classes, class_of
