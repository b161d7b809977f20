//! Character-table export: JSON (exact plus decimal), CSV (decimal) and ASCII.
//!
//! Rows are sorted by `(dim, label)`; columns are class representatives in
//! lexicographic exponent order, which is also element-index order.

use serde::{Deserialize, Serialize};

use crate::catalog::Irrep;
use crate::cyclotomic::Cyclotomic;
use crate::pcgroup::{GroupElement, PcGroup};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassColumn {
    pub representative: GroupElement,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub exact: Cyclotomic,
    pub decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub dim: usize,
    /// `"linear"` or `"spin"`.
    pub kind: String,
    /// Central character exponent; 0 for linear type.
    pub epsilon: i32,
    pub values: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub schema_version: u32,
    pub group: String,
    pub order: usize,
    pub generators: Vec<String>,
    pub classes: Vec<ClassColumn>,
    pub rows: Vec<Row>,
}

impl CharacterTable {
    /// All `irreps` must live on the whole of `group`; `precision` sets decimal digits.
    pub fn new(group: &PcGroup, irreps: &[Irrep], precision: usize) -> CharacterTable {
        let mut sorted: Vec<&Irrep> = irreps.iter().collect();
        sorted.sort_by(|a, b| (a.rep.dim(), a.label()).cmp(&(b.rep.dim(), b.label())));
        let classes = match sorted.first() {
            Some(i) => {
                let chi = i.rep.character();
                chi.partition()
                    .classes()
                    .iter()
                    .map(|c| ClassColumn { representative: group.element(c[0]).clone(), size: c.len() })
                    .collect()
            }
            None => Vec::new(),
        };
        let rows = sorted
            .into_iter()
            .map(|i| Row {
                label: i.label().to_string(),
                dim: i.rep.dim(),
                kind: if i.epsilon() == 0 { "linear" } else { "spin" }.to_string(),
                epsilon: i.epsilon(),
                values: i
                    .rep
                    .character()
                    .values()
                    .iter()
                    .map(|v| Cell { exact: v.clone(), decimal: v.decimal(precision) })
                    .collect(),
            })
            .collect();
        CharacterTable {
            schema_version: SCHEMA_VERSION,
            group: group.name().to_string(),
            order: group.order(),
            generators: group.presentation().generators().to_vec(),
            classes,
            rows,
        }
    }

    /// Keeps only spin-type rows.
    pub fn spin_only(mut self) -> Self {
        self.rows.retain(|r| r.epsilon != 0);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<CharacterTable> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["label".to_string(), "dim".to_string(), "kind".to_string()];
        header.extend(self.classes.iter().map(|c| class_name(&c.representative)));
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut record = vec![r.label.clone(), r.dim.to_string(), r.kind.clone()];
            record.extend(r.values.iter().map(|v| v.decimal.clone()));
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// Terminal table; values are symbolic (`w` = omega) unless `decimal` is set.
    pub fn to_ascii(&self, decimal: bool) -> String {
        let mut grid: Vec<Vec<String>> = Vec::with_capacity(self.rows.len() + 2);
        let mut header = vec!["irrep".to_string(), "dim".to_string(), "kind".to_string()];
        header.extend(self.classes.iter().map(|c| class_name(&c.representative)));
        grid.push(header);
        let mut sizes = vec![String::new(), String::new(), "size".to_string()];
        sizes.extend(self.classes.iter().map(|c| c.size.to_string()));
        grid.push(sizes);
        for r in &self.rows {
            let mut line = vec![r.label.clone(), r.dim.to_string(), r.kind.clone()];
            line.extend(r.values.iter().map(|v| if decimal { v.decimal.clone() } else { v.exact.symbolic() }));
            grid.push(line);
        }
        let widths: Vec<usize> =
            (0..grid[0].len()).map(|j| grid.iter().map(|row| row[j].chars().count()).max().unwrap_or(0)).collect();
        let mut out = format!("{} (order {}, generators {})\n", self.group, self.order, self.generators.join(" "));
        for (n, row) in grid.iter().enumerate() {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
            if n == 1 {
                out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
                out.push('\n');
            }
        }
        out
    }
}

fn class_name(e: &GroupElement) -> String {
    let v: Vec<String> = e.exponents().iter().map(u32::to_string).collect();
    format!("({})", v.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, dual};

    fn table(name: &str) -> CharacterTable {
        let g = build(name).unwrap();
        CharacterTable::new(&g.group, &dual(&g).unwrap(), 12)
    }

    #[test]
    fn rows_and_columns_are_ordered() {
        let t = table("g18_4");
        let labels: Vec<&str> = t.rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["Pi(0,0;0)", "Pi(0,0;1)", "Pi(0,1)", "Pi(1,-1)", "Pi(1,0)", "Pi(1,1)"]);
        let reps: Vec<&GroupElement> = t.classes.iter().map(|c| &c.representative).collect();
        assert!(reps.windows(2).all(|w| w[0].exponents() < w[1].exponents()));
        assert_eq!(t.classes.iter().map(|c| c.size).sum::<usize>(), 18);
    }

    #[test]
    fn json_round_trips_exactly() {
        let t = table("r54_8");
        assert_eq!(CharacterTable::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(t.clone().spin_only().rows.len(), 4);
    }

    #[test]
    fn renderings() {
        let t = table("g18_4");
        let ascii = t.to_ascii(false);
        assert!(ascii.contains("w^2") || ascii.contains("-1"));
        assert!(t.to_ascii(true).contains("-1.000000000000"));
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("label,dim,kind,(0 0 0)"));
        // labels with commas are quoted
        assert!(csv.contains("\"Pi(1,1)\",2,linear"));
    }
}
