#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use testability_core::model::{AttributeDecl, ClassDecl, DesignModel, MethodDecl, ParamDecl, Visibility};

const PRIMITIVES: [&str; 3] = ["int", "string", "bool"];
const VISIBILITIES: [Visibility; 3] = [Visibility::Public, Visibility::Protected, Visibility::Private];

/// A random model that satisfies every validation rule: parents always point
/// to earlier classes, names are unique, signatures are unique per class.
pub fn random_model<R: Rng>(rng: &mut R) -> DesignModel {
    let n = rng.gen_range(1..=8);
    let names: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let mut types: Vec<String> = PRIMITIVES.iter().map(|s| s.to_string()).collect();
    types.extend(names.iter().cloned());
    types.push("External".into());

    let classes = (0..n)
        .map(|i| {
            let mut parents = BTreeSet::new();
            if i > 0 {
                for _ in 0..rng.gen_range(0..=2) {
                    parents.insert(names[rng.gen_range(0..i)].clone());
                }
            }
            let attributes = (0..rng.gen_range(0..=4))
                .map(|a| AttributeDecl {
                    name: format!("a{a}"),
                    type_name: types.choose(rng).unwrap().clone(),
                    visibility: *VISIBILITIES.choose(rng).unwrap(),
                })
                .collect();
            let mut seen = BTreeSet::new();
            let mut methods = Vec::new();
            for _ in 0..rng.gen_range(0..=4) {
                let m = MethodDecl {
                    name: format!("m{}", rng.gen_range(0..4)),
                    visibility: *VISIBILITIES.choose(rng).unwrap(),
                    params: (0..rng.gen_range(0..=3))
                        .map(|p| ParamDecl {
                            name: format!("p{p}"),
                            type_name: types.choose(rng).unwrap().clone(),
                        })
                        .collect(),
                };
                if seen.insert(m.signature()) {
                    methods.push(m);
                }
            }
            ClassDecl {
                name: names[i].clone(),
                parents: parents.into_iter().collect(),
                attributes,
                methods,
            }
        })
        .collect();
    DesignModel {
        project_name: "random".into(),
        classes,
    }
}

/// Consistently renames every class, attribute, method, parameter and type.
pub fn rename_everything(m: &DesignModel) -> DesignModel {
    let mut type_map: HashMap<String, String> = HashMap::new();
    let mut rename_type = |t: &str| -> String {
        let next = type_map.len();
        type_map
            .entry(t.to_string())
            .or_insert_with(|| format!("T{next}_renamed"))
            .clone()
    };
    let classes: Vec<ClassDecl> = m
        .classes
        .iter()
        .map(|c| ClassDecl {
            name: rename_type(&c.name),
            parents: c.parents.iter().map(|p| rename_type(p)).collect(),
            attributes: c
                .attributes
                .iter()
                .map(|a| AttributeDecl {
                    name: format!("field_{}", a.name),
                    type_name: rename_type(&a.type_name),
                    visibility: a.visibility,
                })
                .collect(),
            methods: c
                .methods
                .iter()
                .map(|meth| MethodDecl {
                    name: format!("op_{}", meth.name),
                    visibility: meth.visibility,
                    params: meth
                        .params
                        .iter()
                        .map(|p| ParamDecl {
                            name: format!("arg_{}", p.name),
                            type_name: rename_type(&p.type_name),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    DesignModel {
        project_name: m.project_name.clone(),
        classes,
    }
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}
