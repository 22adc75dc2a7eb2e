//! JSON instance files: a poset, optionally a diagram on it or on a named
//! family of its down-sets, named covers, and free-form metadata. Saving
//! is canonical (stable field order, sorted keys, lowest-term rationals,
//! Hasse-edge relations), so loading any well-formed file and saving it
//! yields bytes that survive further round trips unchanged.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use poset_cosheaf::{
    open_poset, parse_rational, render_rational, Cover, Diagram, DownSet,
    Error as CoreError, FinMap, FinitePoset, Map, Obj, OpenDiagram, RatMatrix, ValueCategory,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("size bound exceeded: {0}")]
    Size(String),
}

impl CliError {
    /// 2 for malformed or invalid input, 3 for blown size bounds.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation(_) => 2,
            CliError::Size(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Size { .. } => CliError::Size(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetBlock {
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
}

/// A linear map as rows of rational strings, or a function as a table of
/// image indices. An empty list parses as an empty table and converts to
/// whichever empty form the declared sizes demand.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapBlock {
    Table(Vec<usize>),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramBlock {
    pub category: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<BTreeMap<String, Vec<String>>>,
    pub objects: BTreeMap<String, usize>,
    pub maps: BTreeMap<String, MapBlock>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverBlock {
    pub target: Vec<String>,
    pub members: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub poset: PosetBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub covers: BTreeMap<String, CoverBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

/// A diagram indexed by the poset itself, or by a family of its opens.
pub enum LoadedDiagram {
    Plain(Diagram),
    OnOpens(OpenDiagram),
}

/// Everything in an instance file, resolved and validated.
pub struct Loaded {
    pub instance: InstanceFile,
    pub poset: Arc<FinitePoset>,
    pub diagram: Option<LoadedDiagram>,
    pub covers: BTreeMap<String, Cover>,
}

pub fn load(path: &Path) -> Result<InstanceFile> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Parse(format!("{}: {err}", path.display())))?;
    serde_json::from_str(&text).map_err(|err| CliError::Parse(err.to_string()))
}

pub fn render(instance: &InstanceFile) -> String {
    let mut text = serde_json::to_string_pretty(instance).expect("instances serialize");
    text.push('\n');
    text
}

pub fn save(instance: &InstanceFile, path: &Path) -> Result<()> {
    fs::write(path, render(instance))
        .map_err(|err| CliError::Parse(format!("{}: {err}", path.display())))
}

/// Loads a file and resolves every block against the poset, so that any
/// ill-formed name, non-down-set, non-functorial diagram, or non-covering
/// member list is rejected up front.
pub fn load_validated(path: &Path) -> Result<Loaded> {
    let instance = load(path)?;
    let poset = build_poset(&instance.poset)?;
    let diagram = match &instance.diagram {
        Some(block) => Some(build_diagram(&poset, block)?),
        None => None,
    };
    let mut covers = BTreeMap::new();
    for (name, block) in &instance.covers {
        let cover = build_cover(&poset, block)
            .map_err(|err| CliError::Validation(format!("cover `{name}`: {err}")))?;
        covers.insert(name.clone(), cover);
    }
    Ok(Loaded {
        instance,
        poset,
        diagram,
        covers,
    })
}

pub fn build_poset(block: &PosetBlock) -> Result<Arc<FinitePoset>> {
    for (i, name) in block.elements.iter().enumerate() {
        if name.contains('<') {
            return Err(CliError::Validation(format!(
                "element name `{name}` may not contain `<`"
            )));
        }
        if block.elements[..i].contains(name) {
            return Err(CliError::Validation(format!(
                "duplicate element name `{name}`"
            )));
        }
    }
    let indices = name_indices(&block.elements);
    let mut pairs = Vec::with_capacity(block.relations.len());
    for (a, b) in &block.relations {
        pairs.push((resolve(&indices, a)?, resolve(&indices, b)?));
    }
    let poset = FinitePoset::with_names(block.elements.clone(), &pairs)?;
    Ok(Arc::new(poset))
}

fn name_indices(names: &[String]) -> BTreeMap<&str, usize> {
    names
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i))
        .collect()
}

fn resolve(indices: &BTreeMap<&str, usize>, name: &str) -> Result<usize> {
    indices
        .get(name)
        .copied()
        .ok_or_else(|| CliError::Validation(format!("unknown element name `{name}`")))
}

pub fn build_down_set(parent: &Arc<FinitePoset>, names: &[String]) -> Result<DownSet> {
    let indices = name_indices(parent.names());
    let members: Vec<usize> = names
        .iter()
        .map(|name| resolve(&indices, name))
        .collect::<Result<_>>()?;
    Ok(DownSet::new(parent, members)?)
}

pub fn build_cover(parent: &Arc<FinitePoset>, block: &CoverBlock) -> Result<Cover> {
    let target = build_down_set(parent, &block.target)?;
    let members: Vec<DownSet> = block
        .members
        .iter()
        .map(|names| build_down_set(parent, names))
        .collect::<Result<_>>()?;
    Ok(Cover::new(target, members)?)
}

pub fn build_category(name: &str) -> Result<ValueCategory> {
    match name {
        "vect" => Ok(ValueCategory::Vect),
        "finset" => Ok(ValueCategory::FinSet),
        other => Err(CliError::Validation(format!(
            "unknown category `{other}`; expected `vect` or `finset`"
        ))),
    }
}

fn category_name(category: ValueCategory) -> &'static str {
    match category {
        ValueCategory::Vect => "vect",
        ValueCategory::FinSet => "finset",
    }
}

fn build_map(
    category: ValueCategory,
    block: &MapBlock,
    source: usize,
    target: usize,
    at: &str,
) -> Result<Map> {
    match (category, block) {
        (ValueCategory::Vect, MapBlock::Matrix(rows)) => {
            if rows.len() != target || rows.iter().any(|row| row.len() != source) {
                return Err(CliError::Validation(format!(
                    "map `{at}`: expected a {target} by {source} matrix"
                )));
            }
            let mut parsed = Vec::with_capacity(rows.len());
            for row in rows {
                let mut out = Vec::with_capacity(row.len());
                for entry in row {
                    out.push(parse_rational(entry).ok_or_else(|| {
                        CliError::Validation(format!("map `{at}`: bad rational `{entry}`"))
                    })?);
                }
                parsed.push(out);
            }
            if parsed.is_empty() {
                return Ok(Map::Vect(RatMatrix::zero(0, source)));
            }
            Ok(Map::Vect(RatMatrix::from_rows(parsed)))
        }
        (ValueCategory::Vect, MapBlock::Table(table)) if table.is_empty() && target == 0 => {
            Ok(Map::Vect(RatMatrix::zero(0, source)))
        }
        (ValueCategory::FinSet, MapBlock::Table(table)) => {
            if table.len() != source {
                return Err(CliError::Validation(format!(
                    "map `{at}`: expected a table of length {source}"
                )));
            }
            let map = FinMap::new(table.clone(), target)
                .map_err(|err| CliError::Validation(format!("map `{at}`: {err}")))?;
            Ok(Map::FinSet(map))
        }
        (ValueCategory::FinSet, MapBlock::Matrix(rows)) if rows.is_empty() && source == 0 => {
            Ok(Map::FinSet(FinMap::new(Vec::new(), target).expect("empty table")))
        }
        (ValueCategory::Vect, _) => Err(CliError::Validation(format!(
            "map `{at}`: expected a matrix of rational strings"
        ))),
        (ValueCategory::FinSet, _) => Err(CliError::Validation(format!(
            "map `{at}`: expected a table of image indices"
        ))),
    }
}

fn split_edge(key: &str) -> Result<(&str, &str)> {
    key.split_once('<').ok_or_else(|| {
        CliError::Validation(format!("map key `{key}` is not of the form `p<q`"))
    })
}

fn assemble(
    base: &Arc<FinitePoset>,
    category: ValueCategory,
    names: &BTreeMap<&str, usize>,
    block: &DiagramBlock,
    kind: &str,
) -> Result<Diagram> {
    let mut sizes = vec![None; base.len()];
    for (name, &size) in &block.objects {
        let Some(&i) = names.get(name.as_str()) else {
            return Err(CliError::Validation(format!("unknown {kind} `{name}` in objects")));
        };
        sizes[i] = Some(size);
    }
    let mut objects = Vec::with_capacity(base.len());
    for (i, size) in sizes.iter().enumerate() {
        let Some(size) = size else {
            return Err(CliError::Validation(format!(
                "missing object for {kind} `{}`",
                base.name(i)
            )));
        };
        objects.push(match category {
            ValueCategory::Vect => Obj::Vect { dim: *size },
            ValueCategory::FinSet => Obj::FinSet { card: *size },
        });
    }
    let mut edge_maps = BTreeMap::new();
    for (key, map_block) in &block.maps {
        let (a, b) = split_edge(key)?;
        let Some(&p) = names.get(a) else {
            return Err(CliError::Validation(format!("unknown {kind} `{a}` in map `{key}`")));
        };
        let Some(&q) = names.get(b) else {
            return Err(CliError::Validation(format!("unknown {kind} `{b}` in map `{key}`")));
        };
        let map = build_map(category, map_block, objects[p].size(), objects[q].size(), key)?;
        edge_maps.insert((p, q), map);
    }
    Ok(Diagram::new(base, category, objects, edge_maps)?)
}

pub fn build_diagram(parent: &Arc<FinitePoset>, block: &DiagramBlock) -> Result<LoadedDiagram> {
    let category = build_category(&block.category)?;
    match &block.opens {
        None => {
            let names = name_indices(parent.names());
            let diagram = assemble(parent, category, &names, block, "element")?;
            Ok(LoadedDiagram::Plain(diagram))
        }
        Some(open_blocks) => {
            let mut family = Vec::with_capacity(open_blocks.len());
            for (alias, member_names) in open_blocks {
                let open = build_down_set(parent, member_names)
                    .map_err(|err| CliError::Validation(format!("open `{alias}`: {err}")))?;
                family.push((alias.as_str(), open));
            }
            let (base, sorted) =
                open_poset(parent, family.iter().map(|(_, o)| o.clone()).collect())?;
            let positions: BTreeMap<&str, usize> = family
                .iter()
                .map(|(alias, open)| {
                    let i = sorted.binary_search(open).expect("open was just inserted");
                    (*alias, i)
                })
                .collect();
            let diagram = assemble(&base, category, &positions, block, "open")?;
            Ok(LoadedDiagram::OnOpens(OpenDiagram::new(
                parent,
                sorted,
                diagram,
            )?))
        }
    }
}

pub fn poset_block(poset: &FinitePoset) -> PosetBlock {
    PosetBlock {
        elements: poset.names().to_vec(),
        relations: poset
            .hasse_edges()
            .into_iter()
            .map(|(p, q)| (poset.name(p).to_string(), poset.name(q).to_string()))
            .collect(),
    }
}

pub fn cover_block(cover: &Cover) -> CoverBlock {
    let names = |open: &DownSet| -> Vec<String> {
        open.member_vec()
            .into_iter()
            .map(|p| cover.parent().name(p).to_string())
            .collect()
    };
    CoverBlock {
        target: names(cover.target()),
        members: cover.members().iter().map(names).collect(),
    }
}

fn map_block(map: &Map) -> MapBlock {
    match map {
        Map::Vect(matrix) => MapBlock::Matrix(
            (0..matrix.rows())
                .map(|r| {
                    (0..matrix.cols())
                        .map(|c| render_rational(matrix.get(r, c)))
                        .collect()
                })
                .collect(),
        ),
        Map::FinSet(table) => MapBlock::Table(table.table().to_vec()),
    }
}

fn diagram_block_on(base: &FinitePoset, diagram: &Diagram) -> DiagramBlock {
    DiagramBlock {
        category: category_name(diagram.category()).to_string(),
        opens: None,
        objects: base
            .names()
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), diagram.object(i).size()))
            .collect(),
        maps: base
            .hasse_edges()
            .into_iter()
            .map(|(p, q)| {
                let key = format!("{}<{}", base.name(p), base.name(q));
                (key, map_block(diagram.edge_map(p, q)))
            })
            .collect(),
    }
}

pub fn plain_diagram_block(diagram: &Diagram) -> DiagramBlock {
    diagram_block_on(diagram.base(), diagram)
}

/// Serializes a diagram on opens: keys are the canonical open names and
/// the `opens` field lists each open's elements.
pub fn open_diagram_block(values: &OpenDiagram) -> DiagramBlock {
    let mut block = diagram_block_on(values.diagram().base(), values.diagram());
    block.opens = Some(
        values
            .opens()
            .iter()
            .map(|open| {
                let members = open
                    .member_vec()
                    .into_iter()
                    .map(|p| values.parent().name(p).to_string())
                    .collect();
                (open.name(), members)
            })
            .collect(),
    );
    block
}
