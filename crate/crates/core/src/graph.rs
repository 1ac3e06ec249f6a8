//! Genotype compatibility graph and the extended haplotype-genotype
//! resolution graph.
//!
//! The compatibility graph connects genotypes that could share a resolving
//! haplotype. The extended graph adds one node per distinct haplotype of a
//! complete solution, with solid edges for compatibility and bold edges for
//! the pairs actually assigned; feasibility means every genotype carries two
//! bold edge endpoints (a self-pair ⟨h,h⟩ contributes one doubled edge).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Haplotype, Instance};
use crate::solution::CompleteSolution;

/// Undirected graph over genotype ids; edge (i,j) iff the genotypes are
/// compatible and i != j. Built once per instance, never mutated.
#[derive(Clone, Debug)]
pub struct CompatibilityGraph {
    n: usize,
    adj: Vec<bool>,
    edges: Vec<(usize, usize)>,
}

impl CompatibilityGraph {
    pub fn build(instance: &Instance) -> Self {
        let n = instance.n();
        let mut adj = vec![false; n * n];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if instance
                    .genotype(i)
                    .compatible_with(instance.genotype(j))
                    .expect("uniform instance length")
                {
                    adj[i * n + j] = true;
                    adj[j * n + i] = true;
                    edges.push((i, j));
                }
            }
        }
        CompatibilityGraph { n, adj, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i * self.n + j]
    }

    /// Edges as (i, j) with i < j, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.has_edge(i, j)).count()
    }

    /// True iff every pair of ids in `set` is connected. Duplicate ids are
    /// allowed (a vertex is trivially "connected" to itself here only in the
    /// sense that it does not break the clique test).
    pub fn is_clique(&self, set: &[usize]) -> Result<bool> {
        for &id in set {
            if id >= self.n {
                return Err(Error::UnknownGenotype { id: id + 1 });
            }
        }
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                if i != j && !self.has_edge(i, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// One line per edge: "gi gj" with 1-based ids.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "g{} g{}", i + 1, j + 1);
        }
        out
    }
}

/// Edge kinds of the extended graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtendedEdge {
    /// Haplotype compatible with the genotype.
    Solid,
    /// Haplotype used in the genotype's assigned pair.
    Bold,
    /// Self-pair ⟨h,h⟩: a single bold edge counted twice.
    BoldDoubled,
}

/// Bipartite haplotype-genotype graph of a complete solution, plus the
/// underlying genotype compatibility graph.
#[derive(Clone, Debug)]
pub struct ExtendedGraph {
    haps: Vec<Haplotype>,
    solid: Vec<(usize, usize)>,
    bold: Vec<(usize, usize, bool)>,
    compat: CompatibilityGraph,
    n: usize,
}

impl ExtendedGraph {
    /// Builds the graph from a complete solution. Haplotype node ids follow
    /// lexicographic order of the distinct haplotypes.
    pub fn build(solution: &CompleteSolution) -> Self {
        let instance = solution.instance();
        let n = instance.n();
        let haps = solution.distinct_haplotypes();
        let hap_index = |h: &Haplotype| haps.binary_search(h).expect("member haplotype");

        let mut solid = Vec::new();
        for (hi, h) in haps.iter().enumerate() {
            for g in instance.compatible_set(h) {
                solid.push((hi, g));
            }
        }

        let mut bold = Vec::new();
        for g in 0..n {
            let (h, k) = solution.pair(g);
            if h == k {
                bold.push((hap_index(&h), g, true));
            } else {
                bold.push((hap_index(&h), g, false));
                bold.push((hap_index(&k), g, false));
            }
        }
        bold.sort();

        ExtendedGraph {
            haps,
            solid,
            bold,
            compat: CompatibilityGraph::build(instance),
            n,
        }
    }

    pub fn haplotypes(&self) -> &[Haplotype] {
        &self.haps
    }

    pub fn solid_edges(&self) -> &[(usize, usize)] {
        &self.solid
    }

    /// Bold edges as (haplotype index, genotype id, doubled).
    pub fn bold_edges(&self) -> &[(usize, usize, bool)] {
        &self.bold
    }

    pub fn compatibility(&self) -> &CompatibilityGraph {
        &self.compat
    }

    /// Every genotype has exactly two bold endpoints counted with
    /// multiplicity. Holds by construction; exposed for tests.
    pub fn is_feasible(&self) -> bool {
        let mut degree = vec![0usize; self.n];
        for &(_, g, doubled) in &self.bold {
            degree[g] += if doubled { 2 } else { 1 };
        }
        degree.iter().all(|&d| d == 2)
    }

    /// Every bold edge is also a compatibility (solid) edge.
    pub fn bold_subset_of_solid(&self) -> bool {
        self.bold
            .iter()
            .all(|&(h, g, _)| self.solid.contains(&(h, g)))
    }

    /// Lines "h# <bits>" declaring haplotype nodes, then one line per edge
    /// "h# g# solid|bold|bold2".
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for (i, h) in self.haps.iter().enumerate() {
            let _ = writeln!(out, "h{} {}", i + 1, h);
        }
        for &(h, g) in &self.solid {
            let _ = writeln!(out, "h{} g{} solid", h + 1, g + 1);
        }
        for &(h, g, doubled) in &self.bold {
            let kind = if doubled { "bold2" } else { "bold" };
            let _ = writeln!(out, "h{} g{} {kind}", h + 1, g + 1);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Haplotype;
    use crate::solution::CompleteSolution;
    use std::sync::Arc;

    fn appendix_instance() -> Arc<Instance> {
        Instance::from_rows(&["2210212", "2112110", "1212122", "1222122", "1202201"]).unwrap()
    }

    fn h(s: &str) -> Haplotype {
        Haplotype::parse(s).unwrap()
    }

    fn appendix_solution(instance: &Arc<Instance>) -> CompleteSolution {
        // an 8-haplotype resolution of the worked instance in which g3's
        // pair members are shared with no other genotype
        let pairs = vec![
            (h("1110110"), h("0010011")), // g1: a, b'
            (h("0111110"), h("1110110")), // g2: c, a
            (h("1111101"), h("1010110")), // g3: d, e
            (h("1110110"), h("1001101")), // g4: a, s
            (h("1101101"), h("1000001")), // g5: f, q
        ];
        CompleteSolution::from_pairs(instance.clone(), &pairs).unwrap()
    }

    #[test]
    fn appendix_compatibility_edges() {
        let graph = CompatibilityGraph::build(&appendix_instance());
        assert_eq!(
            graph.edges(),
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]
        );
    }

    #[test]
    fn single_genotype_has_no_edges() {
        let inst = Instance::from_rows(&["0212"]).unwrap();
        assert!(CompatibilityGraph::build(&inst).edges().is_empty());
    }

    #[test]
    fn duplicate_genotypes_are_connected() {
        let inst = Instance::from_rows(&["0212", "0212"]).unwrap();
        assert_eq!(CompatibilityGraph::build(&inst).edges(), &[(0, 1)]);
    }

    #[test]
    fn clique_checks() {
        let graph = CompatibilityGraph::build(&appendix_instance());
        assert!(graph.is_clique(&[0, 1, 2, 3]).unwrap());
        assert!(!graph.is_clique(&[0, 4]).unwrap());
        assert!(graph.is_clique(&[2]).unwrap());
        assert!(matches!(
            graph.is_clique(&[0, 9]),
            Err(Error::UnknownGenotype { id: 10 })
        ));
    }

    #[test]
    fn compatible_sets_form_cliques() {
        let inst = appendix_instance();
        let graph = CompatibilityGraph::build(&inst);
        for hap in ["1110110", "1101101", "1000001", "0010011"] {
            let set = inst.compatible_set(&h(hap));
            assert!(graph.is_clique(&set).unwrap(), "haplotype {hap}");
        }
    }

    #[test]
    fn appendix_extended_graph() {
        let inst = appendix_instance();
        let sol = appendix_solution(&inst);
        let graph = ExtendedGraph::build(&sol);
        assert_eq!(graph.haplotypes().len(), 8);
        assert_eq!(graph.solid_edges().len(), 16);
        assert_eq!(graph.bold_edges().len(), 10);
        assert!(graph.is_feasible());
        assert!(graph.bold_subset_of_solid());
    }

    #[test]
    fn self_pair_is_one_doubled_bold_edge() {
        let inst = Instance::from_rows(&["00"]).unwrap();
        let sol = CompleteSolution::from_pairs(inst, &[(h("00"), h("00"))]).unwrap();
        let graph = ExtendedGraph::build(&sol);
        assert_eq!(graph.haplotypes().len(), 1);
        assert_eq!(graph.bold_edges(), &[(0, 0, true)]);
        assert!(graph.is_feasible());
    }

    #[test]
    fn export_formats() {
        let inst = Instance::from_rows(&["00", "02"]).unwrap();
        let graph = CompatibilityGraph::build(&inst);
        assert_eq!(graph.export_text(), "g1 g2\n");

        let sol = CompleteSolution::from_pairs(
            inst,
            &[(h("00"), h("00")), (h("00"), h("01"))],
        )
        .unwrap();
        let ext = ExtendedGraph::build(&sol);
        let text = ext.export_text();
        assert!(text.contains("h1 00\n"));
        assert!(text.contains("h1 g1 bold2\n"));
        assert!(text.contains("h2 g2 bold\n"));
        assert!(text.contains("h1 g2 solid\n"));
    }
}
