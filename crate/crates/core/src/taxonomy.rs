//! The three-level subject hierarchy (discipline, sub-discipline, niche area).
//!
//! The taxonomy is input data. Level-3 leaves normally hang under a level-2
//! node; catch-all leaves such as "Engineering (all)" hang directly under
//! their level-1 discipline and therefore have no level-2 ancestor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{CorpusError, TaxonomyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubjectCode(pub u32);

impl fmt::Display for SubjectCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Hierarchy level. Serialized as the integers 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Level {
    Discipline,
    SubDiscipline,
    Niche,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Discipline, Level::SubDiscipline, Level::Niche];

    pub fn number(self) -> u8 {
        match self {
            Level::Discipline => 1,
            Level::SubDiscipline => 2,
            Level::Niche => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Level> {
        match n {
            1 => Some(Level::Discipline),
            2 => Some(Level::SubDiscipline),
            3 => Some(Level::Niche),
            _ => None,
        }
    }

    fn index(self) -> usize {
        usize::from(self.number() - 1)
    }
}

impl TryFrom<u8> for Level {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        Level::from_number(n).ok_or_else(|| format!("level must be 1, 2 or 3, got {n}"))
    }
}

impl From<Level> for u8 {
    fn from(level: Level) -> u8 {
        level.number()
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubjectNode {
    pub code: SubjectCode,
    pub name: String,
    pub level: Level,
    pub parent: Option<SubjectCode>,
}

/// The chain from a node up to its level-1 root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ancestry {
    pub niche: Option<SubjectCode>,
    pub sub_discipline: Option<SubjectCode>,
    pub discipline: SubjectCode,
}

impl Ancestry {
    pub fn at(&self, level: Level) -> Option<SubjectCode> {
        match level {
            Level::Discipline => Some(self.discipline),
            Level::SubDiscipline => self.sub_discipline,
            Level::Niche => self.niche,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubjectTaxonomy {
    nodes: BTreeMap<SubjectCode, SubjectNode>,
    children: BTreeMap<SubjectCode, BTreeSet<SubjectCode>>,
}

impl SubjectTaxonomy {
    /// Builds a taxonomy, rejecting duplicates, orphans, cycles and parents
    /// at the wrong level.
    pub fn from_nodes(nodes: Vec<SubjectNode>) -> Result<Self, TaxonomyError> {
        let mut map = BTreeMap::new();
        for node in nodes {
            let code = node.code;
            if map.insert(code, node).is_some() {
                return Err(TaxonomyError::DuplicateCode(code));
            }
        }

        for node in map.values() {
            if let Some(parent) = node.parent {
                if !map.contains_key(&parent) {
                    return Err(TaxonomyError::OrphanNode {
                        code: node.code,
                        parent,
                    });
                }
            }
        }

        for &start in map.keys() {
            let mut seen = BTreeSet::from([start]);
            let mut cursor = map[&start].parent;
            while let Some(code) = cursor {
                if !seen.insert(code) {
                    return Err(TaxonomyError::Cycle(start));
                }
                cursor = map[&code].parent;
            }
        }

        for node in map.values() {
            let parent_level = node.parent.map(|p| map[&p].level);
            let invalid = |reason: &str| TaxonomyError::InvalidParent {
                code: node.code,
                level: node.level,
                reason: reason.to_string(),
            };
            match (node.level, parent_level) {
                (Level::Discipline, None) => {}
                (Level::Discipline, Some(_)) => {
                    return Err(invalid("level-1 subjects have no parent"))
                }
                (Level::SubDiscipline, Some(Level::Discipline)) => {}
                (Level::SubDiscipline, _) => return Err(invalid("parent must be level 1")),
                (Level::Niche, Some(Level::SubDiscipline | Level::Discipline)) => {}
                (Level::Niche, _) => return Err(invalid("parent must be level 2 or 1")),
            }
        }

        let mut children: BTreeMap<SubjectCode, BTreeSet<SubjectCode>> = BTreeMap::new();
        for node in map.values() {
            if let Some(parent) = node.parent {
                children.entry(parent).or_default().insert(node.code);
            }
        }

        Ok(SubjectTaxonomy {
            nodes: map,
            children,
        })
    }

    /// Parses `code,name,level,parent_code` rows (parent blank for level 1).
    pub fn from_csv<R: Read>(reader: R, file: &str) -> Result<Self, CorpusError> {
        let mut nodes = Vec::new();
        let mut rdr =
            crate::corpus::csv_reader(reader, file, &["code", "name", "level", "parent_code"])?;
        for record in rdr.records() {
            let (record, line) = crate::corpus::record_or_malformed(record, file)?;
            let malformed = |reason: String| CorpusError::MalformedRow {
                file: file.to_string(),
                line,
                reason,
            };
            let code = record[0]
                .trim()
                .parse::<u32>()
                .map_err(|e| malformed(format!("bad code {:?}: {e}", &record[0])))?;
            let level = record[2]
                .trim()
                .parse::<u8>()
                .ok()
                .and_then(Level::from_number)
                .ok_or_else(|| malformed(format!("bad level {:?}", &record[2])))?;
            let parent = match record[3].trim() {
                "" => None,
                p => {
                    Some(SubjectCode(p.parse::<u32>().map_err(|e| {
                        malformed(format!("bad parent_code {p:?}: {e}"))
                    })?))
                }
            };
            nodes.push(SubjectNode {
                code: SubjectCode(code),
                name: record[1].to_string(),
                level,
                parent,
            });
        }
        Ok(SubjectTaxonomy::from_nodes(nodes)?)
    }

    pub fn node(&self, code: SubjectCode) -> Option<&SubjectNode> {
        self.nodes.get(&code)
    }

    pub fn contains(&self, code: SubjectCode) -> bool {
        self.nodes.contains_key(&code)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All nodes in code order.
    pub fn nodes(&self) -> impl Iterator<Item = &SubjectNode> {
        self.nodes.values()
    }

    pub fn nodes_at(&self, level: Level) -> impl Iterator<Item = &SubjectNode> {
        self.nodes.values().filter(move |n| n.level == level)
    }

    pub fn children(&self, code: SubjectCode) -> impl Iterator<Item = SubjectCode> + '_ {
        self.children.get(&code).into_iter().flatten().copied()
    }

    pub fn ancestors(&self, code: SubjectCode) -> Result<Ancestry, TaxonomyError> {
        let mut slots: [Option<SubjectCode>; 3] = [None; 3];
        let mut cursor = Some(code);
        while let Some(c) = cursor {
            let node = self.nodes.get(&c).ok_or(TaxonomyError::UnknownCode(c))?;
            slots[node.level.index()] = Some(c);
            cursor = node.parent;
        }
        Ok(Ancestry {
            niche: slots[2],
            sub_discipline: slots[1],
            // from_nodes guarantees every chain ends at a level-1 root
            discipline: slots[0].expect("chain reaches a level-1 root"),
        })
    }

    /// All level-3 leaves under `code`; a level-3 code yields itself.
    pub fn descendants(&self, code: SubjectCode) -> Result<BTreeSet<SubjectCode>, TaxonomyError> {
        let node = self
            .nodes
            .get(&code)
            .ok_or(TaxonomyError::UnknownCode(code))?;
        let mut out = BTreeSet::new();
        let mut stack = vec![node.code];
        while let Some(c) = stack.pop() {
            if self.nodes[&c].level == Level::Niche {
                out.insert(c);
            } else {
                stack.extend(self.children(c));
            }
        }
        Ok(out)
    }

    /// The de-duplicated subjects at `level` covered by a set of level-3 codes.
    pub fn subjects_at<'a, I>(
        &self,
        codes: I,
        level: Level,
    ) -> Result<BTreeSet<SubjectCode>, TaxonomyError>
    where
        I: IntoIterator<Item = &'a SubjectCode>,
    {
        let mut out = BTreeSet::new();
        for &code in codes {
            if let Some(c) = self.ancestors(code)?.at(level) {
                out.insert(c);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(code: u32, level: u8, parent: Option<u32>) -> SubjectNode {
        SubjectNode {
            code: SubjectCode(code),
            name: format!("S{code}"),
            level: Level::from_number(level).unwrap(),
            parent: parent.map(SubjectCode),
        }
    }

    /// One root with three level-2 children, two leaves each, plus a catch-all.
    fn sample() -> SubjectTaxonomy {
        let mut nodes = vec![node(100, 1, None), node(101, 3, Some(100))];
        for j in 1..=3 {
            let l2 = 100 + j * 10;
            nodes.push(node(l2, 2, Some(100)));
            nodes.push(node(l2 + 1, 3, Some(l2)));
            nodes.push(node(l2 + 2, 3, Some(l2)));
        }
        nodes.push(node(200, 1, None));
        SubjectTaxonomy::from_nodes(nodes).unwrap()
    }

    #[test]
    fn ancestors_of_leaf_and_root() {
        let t = sample();
        let a = t.ancestors(SubjectCode(122)).unwrap();
        assert_eq!(a.niche, Some(SubjectCode(122)));
        assert_eq!(a.sub_discipline, Some(SubjectCode(120)));
        assert_eq!(a.discipline, SubjectCode(100));

        let root = t.ancestors(SubjectCode(200)).unwrap();
        assert_eq!(
            (root.niche, root.sub_discipline, root.discipline),
            (None, None, SubjectCode(200))
        );
    }

    #[test]
    fn catch_all_leaf_has_no_sub_discipline() {
        let t = sample();
        let a = t.ancestors(SubjectCode(101)).unwrap();
        assert_eq!(a.sub_discipline, None);
        assert_eq!(a.discipline, SubjectCode(100));
    }

    #[test]
    fn unknown_code_is_rejected() {
        let t = sample();
        assert!(matches!(
            t.ancestors(SubjectCode(999999)),
            Err(TaxonomyError::UnknownCode(_))
        ));
        assert!(matches!(
            t.descendants(SubjectCode(999999)),
            Err(TaxonomyError::UnknownCode(_))
        ));
    }

    #[test]
    fn descendants_enumerates_leaves() {
        let t = sample();
        let leaves = t.descendants(SubjectCode(100)).unwrap();
        // 3 sub-disciplines x 2 leaves, plus the catch-all
        assert_eq!(leaves.len(), 7);
        assert_eq!(t.descendants(SubjectCode(110)).unwrap().len(), 2);
        assert_eq!(
            t.descendants(SubjectCode(111)).unwrap(),
            BTreeSet::from([SubjectCode(111)])
        );
        assert!(t.descendants(SubjectCode(200)).unwrap().is_empty());
    }

    #[test]
    fn subjects_at_is_set_valued() {
        let t = sample();
        let codes = [SubjectCode(111), SubjectCode(121)];
        assert_eq!(
            t.subjects_at(&codes, Level::Discipline).unwrap(),
            BTreeSet::from([SubjectCode(100)])
        );
        assert_eq!(
            t.subjects_at(&codes, Level::SubDiscipline).unwrap().len(),
            2
        );
        assert_eq!(t.subjects_at(&codes, Level::Niche).unwrap().len(), 2);
    }

    #[test]
    fn rejects_orphans_cycles_and_bad_levels() {
        let orphan = SubjectTaxonomy::from_nodes(vec![node(1, 1, None), node(2, 2, Some(9))]);
        assert!(matches!(orphan, Err(TaxonomyError::OrphanNode { .. })));

        let cycle = SubjectTaxonomy::from_nodes(vec![node(1, 2, Some(2)), node(2, 2, Some(1))]);
        assert!(matches!(cycle, Err(TaxonomyError::Cycle(_))));

        let self_loop = SubjectTaxonomy::from_nodes(vec![node(1, 1, Some(1))]);
        assert!(matches!(self_loop, Err(TaxonomyError::Cycle(_))));

        let bad = SubjectTaxonomy::from_nodes(vec![
            node(1, 1, None),
            node(2, 2, Some(1)),
            node(3, 2, Some(2)),
        ]);
        assert!(matches!(bad, Err(TaxonomyError::InvalidParent { .. })));

        let rootless_leaf = SubjectTaxonomy::from_nodes(vec![node(3, 3, None)]);
        assert!(matches!(
            rootless_leaf,
            Err(TaxonomyError::InvalidParent { .. })
        ));

        let dup = SubjectTaxonomy::from_nodes(vec![node(1, 1, None), node(1, 1, None)]);
        assert!(matches!(dup, Err(TaxonomyError::DuplicateCode(_))));
    }

    #[test]
    fn parses_csv() {
        let csv = "code,name,level,parent_code\n10,\"Biochemistry, Genetics\",1,\n11,Genetics (all),3,10\n";
        let t = SubjectTaxonomy::from_csv(csv.as_bytes(), "taxonomy.csv").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(
            t.node(SubjectCode(10)).unwrap().name,
            "Biochemistry, Genetics"
        );

        let bad = "code,name,level,parent_code\n10,X,4,\n";
        let err = SubjectTaxonomy::from_csv(bad.as_bytes(), "taxonomy.csv").unwrap_err();
        assert!(
            matches!(err, CorpusError::MalformedRow { line: 2, .. }),
            "{err}"
        );
    }
}
