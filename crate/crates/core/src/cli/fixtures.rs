//! Builtin quivers with their dimension vectors.
//!
//! Numbering: nodes run left to right along the long arm, the branch node
//! (or the node hanging off the long arm) comes last.

use crate::error::{Error, Result};
use crate::quiver::{DimensionVector, Quiver};

/// A named quiver, dimension vector, and optional hand-written factors.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub quiver: Quiver,
    pub dims: DimensionVector,
    /// `(label, block recipe)` for factors known in closed form.
    pub recipes: Vec<(String, String)>,
}

impl Fixture {
    fn new(name: &str, nodes: &[&str], arrows: &[(&str, &str, &str)], dims: &[i64]) -> Result<Self> {
        let quiver = Quiver::new(name, nodes, arrows, false)?;
        let dims = quiver.dimension_vector(dims.to_vec())?;
        Ok(Fixture { name: name.to_string(), quiver, dims, recipes: Vec::new() })
    }

    fn owned(name: &str, nodes: Vec<String>, arrows: Vec<(String, String, String)>, dims: Vec<i64>) -> Result<Self> {
        let quiver = Quiver::new(name, &nodes, &arrows, false)?;
        let dims = quiver.dimension_vector(dims)?;
        Ok(Fixture { name: name.to_string(), quiver, dims, recipes: Vec::new() })
    }

    fn with_recipes(mut self, recipes: &[(&str, &str)]) -> Self {
        self.recipes = recipes.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        self
    }

}

/// Names accepted by [`builtin`]; `{n}` ranges are listed in the help text.
pub const BUILTIN_HELP: &str = "a{n} (n>=1), d{n}-prop (n>=4), e6-q1, e6-q2, e7-highroot, e8-central-sink, \
star{n} (n>=1), tilde-d4-i, tilde-d4-ii, tilde-d4-iii, tilde-d4-iv, q1, q2, q3";

const FIXED: &[&str] = &[
    "e6-q1",
    "e6-q2",
    "e7-highroot",
    "e8-central-sink",
    "tilde-d4-i",
    "tilde-d4-ii",
    "tilde-d4-iii",
    "tilde-d4-iv",
    "q1",
    "q2",
    "q3",
];

/// Every fixed-name builtin plus a few members of each family.
pub fn all_builtin_names() -> Vec<String> {
    let mut v: Vec<String> = FIXED.iter().map(|s| s.to_string()).collect();
    v.extend((1..=6).map(|n| format!("a{n}")));
    v.extend((4..=8).map(|n| format!("d{n}-prop")));
    v.extend((1..=4).map(|n| format!("star{n}")));
    v
}

fn family_index(name: &str, prefix: &str, suffix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.strip_suffix(suffix)?.parse().ok()
}

fn letter(i: usize) -> String {
    ((b'A' + i as u8) as char).to_string()
}

/// Looks up a builtin fixture by name.
pub fn builtin(name: &str) -> Result<Fixture> {
    if let Some(n) = family_index(name, "a", "").filter(|&n| n >= 1) {
        return chain(n);
    }
    if let Some(n) = family_index(name, "d", "-prop").filter(|&n| n >= 4) {
        return d_prop(n);
    }
    if let Some(n) = family_index(name, "star", "").filter(|&n| n >= 1) {
        return star(n, name);
    }
    match name {
        "e6-q1" => Ok(Fixture::new(
            name,
            &["1", "2", "3", "4", "5", "6"],
            &[("A", "1", "2"), ("B", "2", "3"), ("C", "4", "3"), ("D", "5", "4"), ("E", "3", "6")],
            &[1, 2, 3, 2, 1, 2],
        )?
        .with_recipes(&[("det[EB]", "EB"), ("det[EC]", "EC"), ("det[B|CD]", "B,CD"), ("det[BA|C]", "BA,C"), ("det[EBA|ECD]", "EBA,ECD")])),
        "e6-q2" => Ok(Fixture::new(
            name,
            &["1", "2", "3", "4", "5", "6"],
            &[("A", "1", "2"), ("B", "2", "3"), ("E", "3", "6"), ("C", "3", "4"), ("D", "4", "5")],
            &[1, 2, 3, 2, 1, 2],
        )?
        .with_recipes(&[("det[EB]", "EB"), ("det[CB]", "CB"), ("det[E;DC]", "E;DC"), ("DCBA", "DCBA")])),
        "e7-highroot" => Ok(Fixture::new(
            name,
            &["1", "2", "3", "4", "5", "6", "7"],
            &[("A", "1", "2"), ("B", "2", "3"), ("C", "3", "4"), ("D", "5", "4"), ("E", "6", "5"), ("F", "7", "4")],
            &[1, 2, 3, 4, 3, 2, 2],
        )?
        .with_recipes(&[
            ("P1", "CBA,D"),
            ("P2", "CB,DE"),
            ("P3", "F,DE"),
            ("P4", "CB,F"),
            ("P5", "-C,D,0;-C,0,F"),
            ("P6", "F,C,0,CBA;0,C,-DE,0"),
        ])),
        "e8-central-sink" => Ok(Fixture::new(
            name,
            &["1", "2", "3", "4", "5", "6", "7", "8"],
            &[
                ("A", "1", "2"),
                ("B", "2", "3"),
                ("D", "4", "3"),
                ("E", "5", "4"),
                ("F", "6", "5"),
                ("G", "7", "6"),
                ("C", "8", "3"),
            ],
            &[2, 4, 6, 5, 4, 3, 2, 3],
        )?
        .with_recipes(&[
            ("P1", "BA,DE"),
            ("P2", "C,DEF"),
            ("P3", "B,DEFG"),
            ("P4", "B,0,D;B,-C,0"),
            ("P5", "BA,B,0,DEF;0,B,-C,0"),
            ("P6", "BA,C,0,DEFG;0,C,-D,0"),
            ("P7", "BA,B,0,C,0,DEFG;0,B,-C,0,0,0;0,0,0,C,-DE,0"),
        ])),
        "tilde-d4-i" => tilde_d4(name, [true, true, true, true]),
        "tilde-d4-ii" => Ok(tilde_d4(name, [false, true, true, true])?.with_recipes(&[
            ("det AB", "AB"),
            ("det AC", "AC"),
            ("det AD", "AD"),
            ("det[B|C|D]", "B,C,D"),
        ])),
        "tilde-d4-iii" => tilde_d4(name, [true, false, false, false]),
        "tilde-d4-iv" => tilde_d4(name, [true, false, true, false]),
        "q1" => star_named(name, 4, "x"),
        "q2" => Ok(Fixture::new(
            name,
            &["a", "b", "c", "d", "e", "x1", "x2"],
            &[("A", "a", "x1"), ("B", "b", "x1"), ("C", "c", "x1"), ("D", "d", "x2"), ("E", "e", "x2"), ("F", "x1", "x2")],
            &[1, 1, 1, 1, 1, 4, 4],
        )?
        .with_recipes(&[("det F", "F"), ("det[FA|FB|D|E]", "FA,FB,D,E")])),
        "q3" => Ok(Fixture::new(
            name,
            &["a", "b", "c", "d", "e", "x2", "x1"],
            &[("A", "a", "x2"), ("B", "b", "x2"), ("C", "c", "x2"), ("D", "d", "x1"), ("E", "e", "x1"), ("F", "x1", "x2")],
            &[1, 1, 1, 1, 1, 4, 4],
        )?
        .with_recipes(&[("det F", "F"), ("det[A|B|FD|FE]", "A,B,FD,FE")])),
        _ => Err(Error::UnknownBuiltin { name: name.to_string(), known: BUILTIN_HELP.to_string() }),
    }
}

fn chain(n: usize) -> Result<Fixture> {
    let nodes: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows = (1..n).map(|i| (letter(i - 1), i.to_string(), (i + 1).to_string())).collect();
    Fixture::owned(&format!("a{n}"), nodes, arrows, vec![1; n])
}

fn d_prop(n: usize) -> Result<Fixture> {
    let k = n - 3;
    let mut nodes = vec!["a".to_string()];
    nodes.extend((1..=k).map(|i| format!("c{i}")));
    nodes.push("z".into());
    nodes.push("b".into());
    let mut arrows = vec![("A".to_string(), "a".to_string(), "c1".to_string()), ("B".into(), "b".into(), "c1".into())];
    arrows.extend((1..k).map(|i| (format!("C{i}"), format!("c{i}"), format!("c{}", i + 1))));
    arrows.push(("D".into(), format!("c{k}"), "z".into()));
    let mut dims = vec![1];
    dims.extend(std::iter::repeat_n(2, k));
    dims.extend([1, 1]);
    let mut f = Fixture::owned(&format!("d{n}-prop"), nodes, arrows, dims)?;
    let chain_word: Vec<String> = (1..k).rev().map(|i| format!("C{i}")).collect();
    let tail = |leaf: &str| {
        let mut w = vec!["D".to_string()];
        w.extend(chain_word.iter().cloned());
        w.push(leaf.to_string());
        w.join("*")
    };
    let mut recipes = vec![("det[A|B]".to_string(), "A,B".to_string())];
    recipes.extend((1..k).map(|i| (format!("det C{i}"), format!("C{i}"))));
    recipes.push(("D…A".into(), tail("A")));
    recipes.push(("D…B".into(), tail("B")));
    f.recipes = recipes;
    Ok(f)
}

fn star(n: usize, name: &str) -> Result<Fixture> {
    let mut f = star_named(name, n, "x")?;
    // maximal minors: drop one source each
    f.recipes = (0..=n)
        .rev()
        .map(|skip| {
            let cols: Vec<String> = (0..=n).filter(|&i| i != skip).map(letter).collect();
            (format!("det[{}]", cols.join("|")), cols.join(","))
        })
        .collect();
    Ok(f)
}

fn star_named(name: &str, n: usize, sink: &str) -> Result<Fixture> {
    let sources: Vec<String> = (0..=n).map(|i| letter(i).to_lowercase()).collect();
    let mut nodes = sources.clone();
    nodes.push(sink.to_string());
    let arrows = sources.iter().enumerate().map(|(i, s)| (letter(i), s.clone(), sink.to_string())).collect();
    let mut dims = vec![1; n + 1];
    dims.push(n as i64);
    Fixture::owned(name, nodes, arrows, dims)
}

/// Outer nodes `a..d`, centre `x` last; `inward[i]` orients arrow `i`
/// towards the centre.
fn tilde_d4(name: &str, inward: [bool; 4]) -> Result<Fixture> {
    let nodes: Vec<String> = ["a", "b", "c", "d", "x"].iter().map(|s| s.to_string()).collect();
    let arrows = (0..4)
        .map(|i| {
            let outer = letter(i).to_lowercase();
            if inward[i] {
                (letter(i), outer, "x".to_string())
            } else {
                (letter(i), "x".to_string(), outer)
            }
        })
        .collect();
    Fixture::owned(name, nodes, arrows, vec![1, 1, 1, 1, 3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{DynkinFamily, GraphType};

    #[test]
    fn e8_shape() {
        let f = builtin("e8-central-sink").unwrap();
        assert_eq!(f.quiver.num_nodes(), 8);
        assert_eq!(f.quiver.num_arrows(), 7);
        assert_eq!(f.dims.entries(), &[2, 4, 6, 5, 4, 3, 2, 3]);
        assert_eq!(f.quiver.graph_type(), GraphType::Dynkin(DynkinFamily::E, 8));
    }

    #[test]
    fn families_classify() {
        assert_eq!(builtin("a5").unwrap().quiver.graph_type(), GraphType::Dynkin(DynkinFamily::A, 5));
        assert_eq!(builtin("d6-prop").unwrap().quiver.graph_type(), GraphType::Dynkin(DynkinFamily::D, 6));
        assert_eq!(builtin("e6-q1").unwrap().quiver.graph_type(), GraphType::Dynkin(DynkinFamily::E, 6));
        assert_eq!(builtin("e6-q2").unwrap().quiver.graph_type(), GraphType::Dynkin(DynkinFamily::E, 6));
        assert_eq!(builtin("e7-highroot").unwrap().quiver.graph_type(), GraphType::Dynkin(DynkinFamily::E, 7));
        assert_eq!(builtin("star3").unwrap().quiver.graph_type(), GraphType::ExtendedDynkin(DynkinFamily::D, 4));
        let s3 = builtin("star3").unwrap();
        assert_eq!(s3.dims.entries(), &[1, 1, 1, 1, 3]);
    }

    #[test]
    fn every_fixture_is_a_real_root() {
        for name in all_builtin_names() {
            let f = builtin(&name).unwrap();
            assert_eq!(f.quiver.tits_form(&f.dims).unwrap(), 1, "{name}");
        }
    }

    #[test]
    fn recipes_parse() {
        for name in all_builtin_names() {
            let f = builtin(&name).unwrap();
            for (label, text) in &f.recipes {
                let r = crate::semi_inv::BlockRecipe::parse(&f.quiver, text).unwrap_or_else(|e| panic!("{name} {label}: {e}"));
                r.validate(&f.dims).unwrap_or_else(|e| panic!("{name} {label}: {e}"));
            }
        }
    }

    #[test]
    fn unknown_name_lists_known() {
        match builtin("e9") {
            Err(Error::UnknownBuiltin { known, .. }) => assert!(known.contains("e8-central-sink")),
            other => panic!("{other:?}"),
        }
    }
}
