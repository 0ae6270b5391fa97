from treeot.tree import Tree


def t(value, *children: Tree) -> Tree:
    """Terse tree literal: t('A', t('B'), t('C', t('D')))."""
    return Tree(value, children)
