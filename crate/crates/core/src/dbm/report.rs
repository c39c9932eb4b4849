//! Size accounting: the stated counting rules and comparison against
//! actually constructed networks.

/// Unit and edge counts after a given cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRow {
    pub cycle: usize,
    pub hidden: usize,
    pub deep: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbmSizeReport {
    pub rows: Vec<SizeRow>,
}

impl DbmSizeReport {
    pub fn final_counts(&self) -> SizeRow {
        *self.rows.last().expect("report always has the initial row")
    }

    /// Total latent (hidden + deep) count after each cycle.
    pub fn latent_totals(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.hidden + r.deep).collect()
    }

    pub fn csv_header() -> &'static str {
        "cycle,hidden,deep,edges"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::csv_header());
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.cycle, r.hidden, r.deep, r.edges));
        }
        out
    }
}

/// The per-layer counting rules, taken as stated: a single-qubit layer
/// doubles the hidden count and adds n deep units; a coupler layer adds 3n
/// hidden and n deep units. Starts from n hidden, 0 deep. The rules say
/// nothing about edge counts, so the edges column is 0 here; compare
/// against a built network for actual numbers.
pub fn size_recurrence(n: usize, depth: usize) -> DbmSizeReport {
    let mut hidden = n;
    let mut deep = 0;
    let mut rows = vec![SizeRow { cycle: 0, hidden, deep, edges: 0 }];
    for cycle in 1..=depth {
        hidden *= 2;
        deep += n;
        hidden += 3 * n;
        deep += n;
        rows.push(SizeRow { cycle, hidden, deep, edges: 0 });
    }
    DbmSizeReport { rows }
}

/// Side-by-side CSV of the counting rules versus a built network. Any
/// disagreement is visible in the output, not hidden.
pub fn comparison_csv(rule: &DbmSizeReport, built: &DbmSizeReport) -> String {
    let mut out = String::from(
        "cycle,hidden_rule,deep_rule,latent_rule,hidden_built,deep_built,latent_built,edges_built\n",
    );
    let blank = SizeRow { cycle: 0, hidden: 0, deep: 0, edges: 0 };
    let depth = rule.rows.len().max(built.rows.len());
    for t in 0..depth {
        let r = rule.rows.get(t).unwrap_or(&blank);
        let b = built.rows.get(t).unwrap_or(&blank);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            t,
            r.hidden,
            r.deep,
            r.hidden + r.deep,
            b.hidden,
            b.deep,
            b.hidden + b.deep,
            b.edges
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_matches_stated_arithmetic() {
        // n=2 depth=1: hidden 2 -> 4 -> 10, deep 0 -> 2 -> 4
        let r = size_recurrence(2, 1);
        assert_eq!(r.rows[0], SizeRow { cycle: 0, hidden: 2, deep: 0, edges: 0 });
        assert_eq!(r.rows[1], SizeRow { cycle: 1, hidden: 10, deep: 4, edges: 0 });
    }

    #[test]
    fn early_growth_ratio_at_least_two() {
        for n in 2..=8 {
            let r = size_recurrence(n, 3);
            let totals = r.latent_totals();
            for w in totals.windows(2) {
                assert!(w[1] >= 2 * w[0], "n={n}: {totals:?}");
            }
        }
    }

    #[test]
    fn growth_ratio_saturates_toward_two_later() {
        // the deep count grows linearly, so the cycle-over-cycle ratio of
        // the total dips just under 2 from cycle 4 onward while the hidden
        // count alone always more than doubles
        let r = size_recurrence(2, 8);
        let totals = r.latent_totals();
        assert!((totals[4] as f64) < 2.0 * totals[3] as f64);
        assert!((totals[4] as f64) > 1.9 * totals[3] as f64);
        for w in r.rows.windows(2) {
            assert!(w[1].hidden > 2 * w[0].hidden - 1);
        }
    }

    #[test]
    fn csv_shape() {
        let r = size_recurrence(3, 2);
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("cycle,hidden,deep,edges\n"));
    }
}
