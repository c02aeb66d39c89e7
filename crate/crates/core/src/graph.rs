use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

/// Strongly connected components that contain a cycle (two or more nodes,
/// or one node with a self-loop). Each component is sorted; components are
/// ordered by their smallest node.
pub(crate) fn cyclic_components<'a, T: Ord + ?Sized>(edges: &[(&'a T, &'a T)]) -> Vec<Vec<&'a T>> {
    let mut adjacency: BTreeMap<&T, Vec<&T>> = BTreeMap::new();
    let mut self_loops = BTreeSet::new();
    for &(from, to) in edges {
        adjacency.entry(from).or_default().push(to);
        adjacency.entry(to).or_default();
        if from == to {
            self_loops.insert(from);
        }
    }

    let mut tarjan = Tarjan {
        adjacency: &adjacency,
        next_index: 0,
        index: BTreeMap::new(),
        lowlink: BTreeMap::new(),
        stack: Vec::new(),
        on_stack: BTreeSet::new(),
        components: Vec::new(),
    };
    for node in adjacency.keys() {
        if !tarjan.index.contains_key(node) {
            tarjan.visit(node);
        }
    }

    let mut cyclic: Vec<Vec<&T>> = tarjan
        .components
        .into_iter()
        .filter(|c| c.len() > 1 || self_loops.contains(c[0]))
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
    cyclic.sort();
    cyclic
}

struct Tarjan<'g, 'a, T: ?Sized> {
    adjacency: &'g BTreeMap<&'a T, Vec<&'a T>>,
    next_index: usize,
    index: BTreeMap<&'a T, usize>,
    lowlink: BTreeMap<&'a T, usize>,
    stack: Vec<&'a T>,
    on_stack: BTreeSet<&'a T>,
    components: Vec<Vec<&'a T>>,
}

impl<'g, 'a, T: Ord + ?Sized> Tarjan<'g, 'a, T> {
    fn visit(&mut self, node: &'a T) {
        self.index.insert(node, self.next_index);
        self.lowlink.insert(node, self.next_index);
        self.next_index += 1;
        self.stack.push(node);
        self.on_stack.insert(node);

        let adjacency = self.adjacency;
        for &next in &adjacency[node] {
            if !self.index.contains_key(next) {
                self.visit(next);
                let low = self.lowlink[node].min(self.lowlink[next]);
                self.lowlink.insert(node, low);
            } else if self.on_stack.contains(next) {
                let low = self.lowlink[node].min(self.index[next]);
                self.lowlink.insert(node, low);
            }
        }

        if self.lowlink[node] == self.index[node] {
            let mut component = Vec::new();
            while let Some(top) = self.stack.pop() {
                self.on_stack.remove(top);
                component.push(top);
                if top == node {
                    break;
                }
            }
            self.components.push(component);
        }
    }
}
