//! Independent full-scan oracle over the raw fixture CSV rows.
//!
//! Nothing here calls into the engine; it re-derives every quantity from
//! the file contents with plain loops.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num::{BigRational, ToPrimitive, Zero};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn rows(file: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_path(fixture_dir().join(file)).unwrap();
    rdr.records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct RawPub {
    pub id: String,
    pub inst: String,
    pub journal: String,
    pub year: i32,
    pub cites: u64,
}

pub struct Oracle {
    pub pubs: Vec<RawPub>,
    pub journal_codes: BTreeMap<String, Vec<u32>>,
    pub snip: BTreeMap<String, Option<f64>>,
    /// code -> (level, parent)
    pub tax: BTreeMap<u32, (u8, Option<u32>)>,
    pub insts: Vec<(String, String, String)>,
}

impl Oracle {
    pub fn load() -> Self {
        let pubs = rows("publications.csv")
            .into_iter()
            .map(|r| RawPub {
                id: r[0].clone(),
                inst: r[1].clone(),
                journal: r[2].clone(),
                year: r[3].parse().unwrap(),
                cites: r[4].parse().unwrap(),
            })
            .collect();
        let journal_codes = rows("journals.csv")
            .into_iter()
            .map(|r| {
                (
                    r[0].clone(),
                    r[2].split(';').map(|c| c.parse().unwrap()).collect(),
                )
            })
            .collect();
        let snip = rows("snip.csv")
            .into_iter()
            .map(|r| {
                (
                    r[0].clone(),
                    if r[1].is_empty() {
                        None
                    } else {
                        Some(r[1].parse().unwrap())
                    },
                )
            })
            .collect();
        let tax = rows("taxonomy.csv")
            .into_iter()
            .map(|r| {
                let parent = if r[3].is_empty() {
                    None
                } else {
                    Some(r[3].parse().unwrap())
                };
                (r[0].parse().unwrap(), (r[2].parse().unwrap(), parent))
            })
            .collect();
        let insts = rows("institutions.csv")
            .into_iter()
            .map(|r| (r[0].clone(), r[1].clone(), r[2].clone()))
            .collect();
        Oracle {
            pubs,
            journal_codes,
            snip,
            tax,
            insts,
        }
    }

    /// Ancestor of `code` at `level`, walking parent links.
    pub fn ancestor_at(&self, code: u32, level: u8) -> Option<u32> {
        let mut cur = Some(code);
        while let Some(c) = cur {
            let (l, p) = self.tax[&c];
            if l == level {
                return Some(c);
            }
            cur = p;
        }
        None
    }

    pub fn journal_in(&self, journal: &str, subject: u32, level: u8) -> bool {
        self.journal_codes[journal]
            .iter()
            .any(|&c| self.ancestor_at(c, level) == Some(subject))
    }

    pub fn leaves_under(&self, subject: u32) -> BTreeSet<u32> {
        let level = self.tax[&subject].0;
        self.tax
            .iter()
            .filter(|(_, (l, _))| *l == 3)
            .map(|(c, _)| *c)
            .filter(|&c| self.ancestor_at(c, level) == Some(subject))
            .collect()
    }

    pub fn top_quartile(&self, leaf: u32) -> BTreeSet<String> {
        let mut items: Vec<(f64, String)> = self
            .journal_codes
            .iter()
            .filter(|(_, codes)| codes.contains(&leaf))
            .filter_map(|(j, _)| self.snip[j].map(|s| (s, j.clone())))
            .collect();
        if items.is_empty() {
            return BTreeSet::new();
        }
        items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let k = items.len().div_ceil(4);
        let cutoff = items[k - 1].0;
        items
            .into_iter()
            .filter(|(s, _)| *s >= cutoff)
            .map(|(_, j)| j)
            .collect()
    }

    pub fn cell(&self, inst: &str, subject: u32, level: u8, years: (i32, i32)) -> Vec<&RawPub> {
        self.pubs
            .iter()
            .filter(|p| p.inst == inst && p.year >= years.0 && p.year <= years.1)
            .filter(|p| self.journal_in(&p.journal, subject, level))
            .collect()
    }

    /// (pubs, cites, h, pct_top_snip, cpp)
    pub fn vector(
        &self,
        inst: &str,
        subject: u32,
        level: u8,
        years: (i32, i32),
    ) -> (u64, u64, u64, f64, f64) {
        let cell = self.cell(inst, subject, level, years);
        let n = cell.len() as u64;
        let cites: u64 = cell.iter().map(|p| p.cites).sum();
        let h = (0..=n)
            .filter(|&h| cell.iter().filter(|p| p.cites >= h).count() as u64 >= h)
            .max()
            .unwrap();
        let tops: Vec<BTreeSet<String>> = self
            .leaves_under(subject)
            .into_iter()
            .map(|l| self.top_quartile(l))
            .collect();
        let hits = cell
            .iter()
            .filter(|p| tops.iter().any(|t| t.contains(&p.journal)))
            .count();
        let pct = if n == 0 {
            0.0
        } else {
            100.0 * hits as f64 / n as f64
        };
        let cpp = if n == 0 { 0.0 } else { cites as f64 / n as f64 };
        (n, cites, h, pct, cpp)
    }

    /// Exact vector as rationals: (pubs, cites, h, pct_top_snip, cpp).
    pub fn exact_vector(
        &self,
        inst: &str,
        subject: u32,
        level: u8,
        years: (i32, i32),
    ) -> [BigRational; 5] {
        let cell = self.cell(inst, subject, level, years);
        let n = cell.len() as i64;
        let cites: i64 = cell.iter().map(|p| p.cites as i64).sum();
        let (_, _, h, _, _) = self.vector(inst, subject, level, years);
        let tops: Vec<BTreeSet<String>> = self
            .leaves_under(subject)
            .into_iter()
            .map(|l| self.top_quartile(l))
            .collect();
        let hits = cell
            .iter()
            .filter(|p| tops.iter().any(|t| t.contains(&p.journal)))
            .count() as i64;
        let r = |a: i64, b: i64| {
            if b == 0 {
                BigRational::zero()
            } else {
                BigRational::new(a.into(), b.into())
            }
        };
        [
            r(n, 1),
            r(cites, 1),
            r(h as i64, 1),
            r(100 * hits, n),
            r(cites, n),
        ]
    }

    /// Band of an exact percentage by scanning the decade ranges.
    pub fn band(p: &BigRational) -> u8 {
        if p.is_zero() {
            return 10;
        }
        for k in 1..=10i64 {
            let lo = BigRational::from_integer((100 - 10 * k).into());
            let hi = BigRational::from_integer((110 - 10 * k).into());
            if *p > lo && *p <= hi {
                return k as u8;
            }
        }
        unreachable!("{p}")
    }

    /// Spreadsheet-style rating in exact arithmetic: (institution, percentage, band), unsorted.
    pub fn rate(
        &self,
        subject: u32,
        level: u8,
        weights: [f64; 5],
        min_pubs: u64,
        region: &str,
        years: (i32, i32),
    ) -> Vec<(String, f64, u8)> {
        let weights = weights.map(|w| BigRational::from_float(w).unwrap());
        let mut table: Vec<(String, [BigRational; 5])> = Vec::new();
        for (id, _, r) in &self.insts {
            if region != "ALL" && r != region {
                continue;
            }
            let v = self.exact_vector(id, subject, level, years);
            if v[0] >= BigRational::from_integer((min_pubs as i64).into()) {
                table.push((id.clone(), v));
            }
        }
        let mut max: [BigRational; 5] = Default::default();
        for (_, v) in &table {
            for i in 0..5 {
                if v[i] > max[i] {
                    max[i] = v[i].clone();
                }
            }
        }
        let totals: Vec<BigRational> = table
            .iter()
            .map(|(_, v)| {
                (0..5)
                    .filter(|&i| !max[i].is_zero())
                    .map(|i| &v[i] / &max[i] * &weights[i])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect();
        let best = totals
            .iter()
            .cloned()
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        table
            .iter()
            .zip(totals)
            .map(|((id, _), t)| {
                let p = if best.is_zero() {
                    BigRational::zero()
                } else {
                    t / &best * BigRational::from_integer(100.into())
                };
                (id.clone(), p.to_f64().unwrap(), Self::band(&p))
            })
            .collect()
    }
}
