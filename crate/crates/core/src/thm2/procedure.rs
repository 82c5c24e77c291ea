use super::audit::check_pi;
use super::state::RepairState;
use super::{RepairOutcome, Thm2Error};
use crate::partition::Color;

impl RepairState {
    fn o_component_size(&self, start: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in self.g.neighbors(u) {
                if !seen[w] && self.coloring[w] == Color::O {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        size
    }

    /// Union of the components of `G[O⁰]` that meet `seeds`, sorted.
    pub(crate) fn o0_closure(&self, seeds: &[usize]) -> Vec<usize> {
        let n = self.g.n();
        let in_o0 = |v: usize| self.coloring[v] == Color::O && self.marks[v] == 0;
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = seeds.iter().copied().filter(|&s| in_o0(s)).collect();
        for &s in &stack {
            seen[s] = true;
        }
        let mut out = Vec::new();
        while let Some(u) = stack.pop() {
            out.push(u);
            for &w in self.g.neighbors(u) {
                if !seen[w] && in_o0(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `X` (members of `w_set` in O-components of order above `k`) and `C`
    /// (the `O⁰`-components meeting `X`), after moving to I every vertex of
    /// `C \ X` whose neighbours are all O.
    fn define_x_c(&mut self, w_set: &[usize]) -> (Vec<usize>, Vec<usize>) {
        loop {
            let x: Vec<usize> = w_set
                .iter()
                .copied()
                .filter(|&w| self.coloring[w] == Color::O && self.o_component_size(w) > self.k)
                .collect();
            let c = self.o0_closure(&x);
            let free = c.iter().copied().find(|&u| {
                x.binary_search(&u).is_err()
                    && self
                        .g
                        .neighbors(u)
                        .iter()
                        .all(|&y| self.coloring[y] == Color::O)
            });
            match free {
                Some(u) => self.set_color(u, Color::I),
                None => return (x, c),
            }
        }
    }

    fn mark_c(&mut self, x: &[usize], c: &[usize]) {
        for &u in c {
            if x.binary_search(&u).is_err() && self.g.degree(u) >= 3 {
                self.set_mark(u, 1);
            }
        }
        for &u in x {
            self.set_mark(u, 2);
        }
    }

    pub(crate) fn has_adjacent_i(&self) -> Option<(usize, usize)> {
        self.g
            .edges()
            .into_iter()
            .find(|&(u, v)| self.coloring[u] == Color::I && self.coloring[v] == Color::I)
    }

    fn monitor(&mut self, stage: &str, v: usize) {
        if !check_pi(self) {
            self.violations
                .push(format!("property Pi fails at {stage} of the call for {v}"));
        }
        if let Some((a, b)) = self.has_adjacent_i() {
            self.violations.push(format!(
                "adjacent I-vertices {a},{b} at {stage} of the call for {v}"
            ));
        }
        if let Some(u) =
            (0..self.g.n()).find(|&u| self.coloring[u] == Color::I && self.marks[u] == 1)
        {
            self.violations.push(format!(
                "vertex {u} is in I and marked once at {stage} of the call for {v}"
            ));
        }
    }

    /// The secondary procedure for an O-vertex `v` marked twice: either moves
    /// `v` to I (resolving every conflict this creates), or gives `v` a
    /// neutral edge or a cluster set, leaving the coloring untouched.
    pub fn p_sub(&mut self, v: usize) -> Result<RepairOutcome, Thm2Error> {
        if self.coloring[v] != Color::O || self.marks[v] != 2 {
            return Err(Thm2Error::PreconditionViolated(format!(
                "p_sub needs an O-vertex marked twice, got {v}"
            )));
        }
        let (color_hash, structure_hash) = (self.coloring_hash(), self.structure_hash());
        if self.monitors {
            self.monitor("entry", v);
        }
        let out = self.p_sub_body(v)?;
        if self.monitors {
            self.monitor("exit", v);
            let unchanged = match out {
                RepairOutcome::RecoloredToI => self.structure_hash() == structure_hash,
                _ => self.coloring_hash() == color_hash,
            };
            if !unchanged {
                self.violations
                    .push(format!("call for {v} changed both colors and structure"));
            }
        }
        Ok(out)
    }

    fn p_sub_body(&mut self, v: usize) -> Result<RepairOutcome, Thm2Error> {
        let w_set: Vec<usize> = self
            .g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| self.coloring[w] == Color::I)
            .collect();

        if let Some(&w) = w_set.iter().find(|&&w| self.marks[w] == 2) {
            self.set_cluster(v, Vec::new());
            self.add_neutral(v, w);
            return Ok(RepairOutcome::NeutralEdgeSet { edge: (v, w) });
        }
        for &w in &w_set {
            let o2 = self
                .g
                .neighbors(w)
                .iter()
                .copied()
                .find(|&u| u != v && self.coloring[u] == Color::O && self.marks[u] == 2);
            if let Some(u) = o2 {
                self.set_cluster(v, vec![w]);
                self.set_giving(w, u);
                self.set_mark(w, 2);
                return Ok(RepairOutcome::ClusterSetBuilt {
                    supervisor: Some(v),
                    members: vec![w],
                });
            }
        }
        for &w in &w_set {
            let o1 = self
                .g
                .neighbors(w)
                .iter()
                .copied()
                .find(|&u| self.coloring[u] == Color::O && self.marks[u] == 1);
            if let Some(u) = o1 {
                self.set_cluster(v, vec![w]);
                self.set_cluster(u, vec![w]);
                self.set_mark(u, 2);
                self.set_mark(w, 2);
                return Ok(RepairOutcome::ClusterSetBuilt {
                    supervisor: Some(v),
                    members: vec![w],
                });
            }
        }

        let start_marks = self.marks.clone();
        let token = self.checkpoint();
        self.set_color(v, Color::I);
        for &w in &w_set {
            self.set_color(w, Color::O);
        }
        let (mut x, mut c) = self.define_x_c(&w_set);
        if x.is_empty() {
            self.release(token)?;
            return Ok(RepairOutcome::RecoloredToI);
        }
        self.mark_c(&x, &c);
        while let Some(cv) = c
            .iter()
            .copied()
            .find(|&u| x.binary_search(&u).is_err() && self.marks[u] == 1)
        {
            self.set_mark(cv, 2);
            self.p_sub(cv)?;
            if self.coloring[cv] == Color::I {
                self.rollback_marks(&token)?;
                (x, c) = self.define_x_c(&w_set);
                if x.is_empty() {
                    self.release(token)?;
                    return Ok(RepairOutcome::RecoloredToI);
                }
                self.mark_c(&x, &c);
            }
        }

        let mut members = Vec::new();
        for comp in self.g.components(&c) {
            let keep: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&u| self.g.degree(u) >= 3 || x.binary_search(&u).is_ok())
                .collect();
            if comp.len() > self.k {
                members.extend(keep);
                continue;
            }
            let link = comp
                .iter()
                .copied()
                .filter(|&u| self.g.degree(u) >= 3)
                .flat_map(|u| self.g.neighbors(u).iter().map(move |&y| (u, y)))
                .filter(|&(_, y)| start_marks[y] == 2 && self.coloring[y] == Color::O)
                .min();
            if let Some(pair) = link {
                members.extend(keep);
                self.set_giving(pair.0, pair.1);
            }
        }
        members.sort_unstable();
        self.set_cluster(v, members.clone());
        self.rollback_colors(&token)?;
        self.release(token)?;
        Ok(RepairOutcome::ClusterSetBuilt {
            supervisor: Some(v),
            members,
        })
    }
}
