//! JSON wire forms for every domain type, their validating parsers, and a
//! content-addressed result cache.
//!
//! Every top-level document carries `"schema_version": 1`. Parsers take
//! untrusted text and never panic; all sizes are capped before anything
//! quadratic is allocated.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::brpic::{BrPicElement, BrPicTable, ConventionSpec, FormOutcome, OrderFlag};
use crate::cocycles::{Cocycle, CocycleError, CocycleForm, MAX_INPUT_MODULUS};
use crate::comodalg::{AlgebraError, BimoduleClass, CotensorOrigin, GradedAlgebra, Term};
use crate::duality::{DualPair, OrthogonalMap};
use crate::fusion::FusionSummand;
use crate::groups::{FiniteGroup, GroupError, GroupHom, Subgroup, DEFAULT_ORDER_CAP};

pub const SCHEMA_VERSION: u32 = 1;
pub const ARTIFACT_VERSION: &str = concat!("hbp-core/", env!("CARGO_PKG_VERSION"), "/schema-1");

/// Longest accepted invariant list.
pub const MAX_INVARIANTS: usize = 32;
/// Largest accepted permutation degree.
pub const MAX_DEGREE: usize = 64;
/// Largest accepted JSON document, in bytes.
pub const MAX_INPUT_BYTES: usize = 16 << 20;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unsupported schema_version {got} (expected {expected})")]
    SchemaVersion { got: u32, expected: u32 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cache: {0}")]
    Cache(String),
    #[error("cached value for key {key} does not match recomputation")]
    CacheMismatch { key: String },
}

fn invalid(msg: impl Into<String>) -> IoError {
    IoError::Invalid(msg.into())
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    if text.len() > MAX_INPUT_BYTES {
        return Err(invalid(format!("document larger than {MAX_INPUT_BYTES} bytes")));
    }
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

fn check_version(v: u32) -> Result<(), IoError> {
    if v != SCHEMA_VERSION {
        return Err(IoError::SchemaVersion {
            got: v,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(())
}

/// Serializes a wire value to its canonical compact form.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("wire types serialize infallibly")
}

fn is_false(b: &bool) -> bool {
    !*b
}

// ---------------------------------------------------------------- groups

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    CyclicProduct { invariants: Vec<usize> },
    Cayley { table: Vec<Vec<usize>> },
    PermutationGens { degree: usize, generators: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub schema_version: u32,
    #[serde(flatten)]
    pub kind: GroupKind,
}

impl GroupSpec {
    pub fn cyclic_product(invariants: &[usize]) -> Self {
        GroupSpec {
            schema_version: SCHEMA_VERSION,
            kind: GroupKind::CyclicProduct {
                invariants: invariants.to_vec(),
            },
        }
    }

    pub fn cayley(table: Vec<Vec<usize>>) -> Self {
        GroupSpec {
            schema_version: SCHEMA_VERSION,
            kind: GroupKind::Cayley { table },
        }
    }

    pub fn permutation_gens(degree: usize, generators: Vec<Vec<usize>>) -> Self {
        GroupSpec {
            schema_version: SCHEMA_VERSION,
            kind: GroupKind::PermutationGens { degree, generators },
        }
    }

    /// Validates and builds the group.
    pub fn build(&self) -> Result<FiniteGroup, IoError> {
        check_version(self.schema_version)?;
        Ok(match &self.kind {
            GroupKind::CyclicProduct { invariants } => {
                if invariants.len() > MAX_INVARIANTS {
                    return Err(invalid(format!("more than {MAX_INVARIANTS} cyclic factors")));
                }
                FiniteGroup::cyclic_product(invariants)?
            }
            GroupKind::Cayley { table } => {
                if table.len() > DEFAULT_ORDER_CAP {
                    return Err(GroupError::OrderCapExceeded {
                        order: table.len(),
                        cap: DEFAULT_ORDER_CAP,
                    }
                    .into());
                }
                FiniteGroup::from_table(table)?
            }
            GroupKind::PermutationGens { degree, generators } => {
                if *degree > MAX_DEGREE {
                    return Err(invalid(format!("permutation degree above {MAX_DEGREE}")));
                }
                if generators.len() > DEFAULT_ORDER_CAP {
                    return Err(invalid("too many generators"));
                }
                FiniteGroup::from_permutations(*degree, generators)?
            }
        })
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec, IoError> {
    let spec: GroupSpec = decode(text)?;
    check_version(spec.schema_version)?;
    Ok(spec)
}

/// Parses and builds in one step.
pub fn parse_group(text: &str) -> Result<(GroupSpec, Arc<FiniteGroup>), IoError> {
    let spec = parse_group_spec(text)?;
    let g = Arc::new(spec.build()?);
    Ok((spec, g))
}

fn square_of(g: &FiniteGroup) -> Result<Arc<FiniteGroup>, IoError> {
    Ok(Arc::new(FiniteGroup::direct_product(g, g)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub schema_version: u32,
    pub order: usize,
    pub abelian: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Vec<usize>>,
    pub exponent: usize,
    pub element_orders: Vec<usize>,
}

pub fn group_info(g: &FiniteGroup) -> GroupInfo {
    GroupInfo {
        schema_version: SCHEMA_VERSION,
        order: g.order(),
        abelian: g.is_commutative(),
        invariants: g.abelian_invariants().map(<[usize]>::to_vec),
        exponent: g.exponent(),
        element_orders: (0..g.order()).map(|x| g.element_order(x)).collect(),
    }
}

// ---------------------------------------------------------------- cocycles

/// Subgroup of the base group (or of its square when `square` is set),
/// given by its full member list or by generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub square: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleWire {
    pub schema_version: u32,
    pub modulus: usize,
    pub domain: DomainWire,
    pub values: Vec<Vec<usize>>,
}

pub fn cocycle_to_wire(psi: &Cocycle, group: Option<&GroupSpec>, square: bool) -> CocycleWire {
    CocycleWire {
        schema_version: SCHEMA_VERSION,
        modulus: psi.modulus(),
        domain: DomainWire {
            group: group.cloned(),
            square,
            members: Some(psi.domain().members().to_vec()),
            generators: None,
        },
        values: psi.table(),
    }
}

fn subgroup_from_wire(parent: &Arc<FiniteGroup>, d: &DomainWire) -> Result<Subgroup, IoError> {
    match (&d.members, &d.generators) {
        (Some(m), None) => {
            if m.len() > parent.order() {
                return Err(invalid("more members than group elements"));
            }
            Ok(Subgroup::from_members(parent.clone(), m)?)
        }
        (None, Some(g)) => {
            if g.len() > parent.order() {
                return Err(invalid("more generators than group elements"));
            }
            Ok(Subgroup::generated(parent.clone(), g)?)
        }
        _ => Err(invalid("domain needs exactly one of \"members\" or \"generators\"")),
    }
}

/// Resolves the group a domain lives in: its own spec if present,
/// otherwise the context group, squared on request.
fn domain_parent(d: &DomainWire, base: Option<&Arc<FiniteGroup>>) -> Result<Arc<FiniteGroup>, IoError> {
    let base = match (&d.group, base) {
        (Some(spec), _) => Arc::new(spec.build()?),
        (None, Some(g)) => g.clone(),
        (None, None) => return Err(invalid("cocycle domain names no group and none was supplied")),
    };
    if d.square {
        square_of(&base)
    } else {
        Ok(base)
    }
}

fn cocycle_from_wire(w: &CocycleWire, parent: &Arc<FiniteGroup>) -> Result<Cocycle, IoError> {
    check_version(w.schema_version)?;
    if w.modulus == 0 || w.modulus > MAX_INPUT_MODULUS {
        return Err(CocycleError::BadModulus {
            got: w.modulus,
            max: MAX_INPUT_MODULUS,
        }
        .into());
    }
    let domain = subgroup_from_wire(parent, &w.domain)?;
    Ok(Cocycle::new(domain, w.modulus, &w.values)?)
}

/// Parses a cochain table. The cocycle identity is not enforced here so
/// that `check` can report on it; use [`crate::cocycles::check_cocycle`].
pub fn parse_cocycle(text: &str, group: Option<&Arc<FiniteGroup>>) -> Result<Cocycle, IoError> {
    let w: CocycleWire = decode(text)?;
    check_version(w.schema_version)?;
    let parent = domain_parent(&w.domain, group)?;
    cocycle_from_wire(&w, &parent)
}

// ---------------------------------------------------------------- classes

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassWire {
    pub schema_version: u32,
    pub group: GroupSpec,
    pub support: Vec<usize>,
    pub cocycle: CocycleWire,
    #[serde(default)]
    pub provenance: String,
}

/// `group` is the base group `G`; the support lives in `G × G`.
pub fn class_to_wire(class: &BimoduleClass, group: &GroupSpec) -> ClassWire {
    ClassWire {
        schema_version: SCHEMA_VERSION,
        group: group.clone(),
        support: class.support.members().to_vec(),
        cocycle: cocycle_to_wire(&class.cocycle, None, true),
        provenance: class.provenance.clone(),
    }
}

fn class_from_wire(w: &ClassWire, square: &Arc<FiniteGroup>) -> Result<BimoduleClass, IoError> {
    check_version(w.schema_version)?;
    if !w.cocycle.domain.square || w.cocycle.domain.group.is_some() {
        return Err(invalid("class cocycle must live on the square of the class group"));
    }
    if w.support.len() > square.order() {
        return Err(invalid("support larger than G x G"));
    }
    let support = Subgroup::from_members(square.clone(), &w.support)?;
    let cocycle = cocycle_from_wire(&w.cocycle, square)?;
    Ok(BimoduleClass::new(support, cocycle, w.provenance.clone())?)
}

pub fn parse_class(text: &str) -> Result<(GroupSpec, BimoduleClass), IoError> {
    let w: ClassWire = decode(text)?;
    check_version(w.schema_version)?;
    let g = w.group.build()?;
    let sq = square_of(&g)?;
    let class = class_from_wire(&w, &sq)?;
    Ok((w.group, class))
}

// ---------------------------------------------------------------- algebras

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginWire {
    pub pairs: Vec<(usize, usize)>,
    pub opposite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraWire {
    pub schema_version: u32,
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "is_false")]
    pub square: bool,
    pub modulus: usize,
    pub degrees: Vec<usize>,
    /// `null` for a zero product, `[coef, target]` for `ζ^coef u_target`.
    pub mul: Vec<Vec<Option<(usize, usize)>>>,
    pub unit: Vec<usize>,
    #[serde(default)]
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<OriginWire>,
}

/// `group` describes the grading group, or its square root when `square`
/// is set.
pub fn algebra_to_wire(a: &GradedAlgebra, group: &GroupSpec, square: bool) -> AlgebraWire {
    AlgebraWire {
        schema_version: SCHEMA_VERSION,
        group: group.clone(),
        square,
        modulus: a.modulus(),
        degrees: a.degrees().to_vec(),
        mul: a
            .table()
            .into_iter()
            .map(|r| r.into_iter().map(|t| t.map(|t| (t.coef, t.target))).collect())
            .collect(),
        unit: a.unit().to_vec(),
        provenance: a.provenance().to_string(),
        origin: a.origin().map(|o| OriginWire {
            pairs: o.pairs.clone(),
            opposite: o.opposite,
        }),
    }
}

/// Parses a graded algebra and checks associativity.
pub fn parse_algebra(text: &str) -> Result<(GroupSpec, bool, GradedAlgebra), IoError> {
    let w: AlgebraWire = decode(text)?;
    check_version(w.schema_version)?;
    if w.modulus == 0 || w.modulus > MAX_INPUT_MODULUS {
        return Err(CocycleError::BadModulus {
            got: w.modulus,
            max: MAX_INPUT_MODULUS,
        }
        .into());
    }
    if w.degrees.len() > DEFAULT_ORDER_CAP {
        return Err(invalid(format!("algebra dimension above {DEFAULT_ORDER_CAP}")));
    }
    let g = Arc::new(w.group.build()?);
    let grading = if w.square { square_of(&g)? } else { g };
    let mul = w
        .mul
        .iter()
        .map(|r| r.iter().map(|t| t.map(|(coef, target)| Term { coef, target })).collect())
        .collect();
    let a = GradedAlgebra::new(grading, w.modulus, w.degrees.clone(), mul, w.unit.clone(), w.provenance.clone())?;
    a.check_associative()?;
    let a = a.with_origin(w.origin.map(|o| CotensorOrigin {
        pairs: o.pairs,
        opposite: o.opposite,
    }))?;
    Ok((w.group, w.square, a))
}

// ---------------------------------------------------------------- conventions

/// Parses a convention object and checks it describes a valid matching.
pub fn parse_convention(text: &str) -> Result<ConventionSpec, IoError> {
    let spec: ConventionSpec = decode(text)?;
    spec.cotensor.validate()?;
    Ok(spec)
}

// ---------------------------------------------------------------- orthogonal maps

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthListWire {
    pub schema_version: u32,
    pub group: GroupSpec,
    /// Images of the elements of `G ⊕ Ĝ`, index `g * |G| + χ`.
    pub maps: Vec<Vec<usize>>,
}

pub fn orth_list_to_wire(maps: &[OrthogonalMap], group: &GroupSpec) -> OrthListWire {
    OrthListWire {
        schema_version: SCHEMA_VERSION,
        group: group.clone(),
        maps: maps.iter().map(|m| m.image().to_vec()).collect(),
    }
}

fn orth_from_image(pair: &Arc<DualPair>, image: &[usize]) -> Result<OrthogonalMap, IoError> {
    let d = pair.double();
    if image.len() != d.order() {
        return Err(invalid("orthogonal map image has the wrong length"));
    }
    let hom = GroupHom::new(d.clone(), d.clone(), image.to_vec())?;
    OrthogonalMap::new(pair.clone(), hom).ok_or_else(|| invalid("map is not an orthogonal automorphism"))
}

pub fn parse_orth_list(text: &str) -> Result<(GroupSpec, Vec<OrthogonalMap>), IoError> {
    let w: OrthListWire = decode(text)?;
    check_version(w.schema_version)?;
    let pair = pair_for(&w.group)?;
    let maps = w
        .maps
        .iter()
        .map(|m| orth_from_image(&pair, m))
        .collect::<Result<_, _>>()?;
    Ok((w.group, maps))
}

/// The dual pair of an abelian group spec, with the double capped at the
/// default order cap.
pub fn pair_for(spec: &GroupSpec) -> Result<Arc<DualPair>, IoError> {
    let g = spec.build()?;
    if !g.is_commutative() {
        return Err(GroupError::NotAbelian.into());
    }
    Ok(Arc::new(DualPair::from_group(Arc::new(g))?))
}

// ---------------------------------------------------------------- tables

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormWire {
    pub form: CocycleForm,
    pub outcome: FormOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementWire {
    pub alpha: Vec<usize>,
    pub class: ClassWire,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableWire {
    pub schema_version: u32,
    pub group: GroupSpec,
    pub convention: ConventionSpec,
    pub order_flag: OrderFlag,
    pub product: Vec<Vec<usize>>,
    pub free: Vec<Vec<bool>>,
    pub forms: Vec<FormWire>,
    pub elements: Vec<ElementWire>,
}

pub fn table_to_wire(t: &BrPicTable, group: &GroupSpec) -> TableWire {
    TableWire {
        schema_version: SCHEMA_VERSION,
        group: group.clone(),
        convention: t.convention,
        order_flag: t.order_flag,
        product: t.product.clone(),
        free: t.free.clone(),
        forms: t
            .forms
            .iter()
            .map(|(form, outcome)| FormWire {
                form: *form,
                outcome: outcome.clone(),
            })
            .collect(),
        elements: t
            .elements
            .iter()
            .map(|e| ElementWire {
                alpha: e.alpha.image().to_vec(),
                class: class_to_wire(&e.class, group),
            })
            .collect(),
    }
}

/// Parses a table artifact and checks its shape, maps and classes. The
/// group law itself is not re-derived.
pub fn parse_table(text: &str) -> Result<BrPicTable, IoError> {
    let w: TableWire = decode(text)?;
    check_version(w.schema_version)?;
    w.convention.cotensor.validate()?;
    let pair = pair_for(&w.group)?;
    let n = w.elements.len();
    if n == 0 || n > pair.double().order() * pair.double().order() {
        return Err(invalid("table has an implausible number of elements"));
    }
    let bad_product = w.product.len() != n || w.product.iter().any(|r| r.len() != n);
    let bad_free = w.free.len() != n || w.free.iter().any(|r| r.len() != n);
    if bad_product || bad_free {
        return Err(invalid("product and free must be n x n"));
    }
    if w.product.iter().flatten().any(|&v| v >= n) {
        return Err(invalid("product entry out of range"));
    }
    let mut elements = Vec::with_capacity(n);
    for e in &w.elements {
        if e.class.group != w.group {
            return Err(invalid("element class is over a different group"));
        }
        let alpha = orth_from_image(&pair, &e.alpha)?;
        let class = class_from_wire(&e.class, pair.square())?;
        elements.push(BrPicElement { alpha, class });
    }
    Ok(BrPicTable {
        pair,
        elements,
        product: w.product,
        free: w.free,
        convention: w.convention,
        order_flag: w.order_flag,
        forms: w.forms.into_iter().map(|f| (f.form, f.outcome)).collect(),
    })
}

// ---------------------------------------------------------------- fusion

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandWire {
    pub rep: usize,
    pub fs: Vec<usize>,
    pub psi_s: CocycleWire,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionWire {
    pub schema_version: u32,
    pub group: GroupSpec,
    pub summands: Vec<SummandWire>,
}

pub fn fusion_to_wire(summands: &[FusionSummand], group: &GroupSpec) -> FusionWire {
    FusionWire {
        schema_version: SCHEMA_VERSION,
        group: group.clone(),
        summands: summands
            .iter()
            .map(|s| SummandWire {
                rep: s.rep,
                fs: s.fs.members().to_vec(),
                psi_s: cocycle_to_wire(&s.psi_s, None, false),
            })
            .collect(),
    }
}

pub fn parse_fusion(text: &str) -> Result<(GroupSpec, Vec<FusionSummand>), IoError> {
    let w: FusionWire = decode(text)?;
    check_version(w.schema_version)?;
    let g = Arc::new(w.group.build()?);
    let mut out = Vec::with_capacity(w.summands.len());
    for s in &w.summands {
        g.check_index(s.rep)?;
        let fs = Subgroup::from_members(g.clone(), &s.fs)?;
        if s.psi_s.domain.group.is_some() || s.psi_s.domain.square {
            return Err(invalid("summand cocycle must live on the fusion group"));
        }
        let psi_s = cocycle_from_wire(&s.psi_s, &g)?;
        if psi_s.domain() != &fs {
            return Err(CocycleError::DomainMismatch.into());
        }
        out.push(FusionSummand { rep: s.rep, fs, psi_s });
    }
    Ok((w.group, out))
}

// ---------------------------------------------------------------- cache

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub created_at: u64,
    pub value: Value,
}

pub fn parse_cache_entry(text: &str) -> Result<CacheEntry, IoError> {
    let e: CacheEntry = decode(text)?;
    if e.key.len() != 64 || !e.key.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(invalid("cache key must be 64 hex digits"));
    }
    Ok(e)
}

/// SHA-256 over the artifact version, operation name, canonical group
/// spec and parameters.
pub fn cache_key(op: &str, group: &GroupSpec, params: &Value) -> String {
    let doc = serde_json::json!({
        "version": ARTIFACT_VERSION,
        "op": op,
        "group": group,
        "params": params,
    });
    hex::encode(Sha256::digest(to_canonical(&doc).as_bytes()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Miss,
    Hit,
    Verified,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, IoError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| IoError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A missing, unreadable or foreign entry is a miss.
    pub fn load(&self, key: &str) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        parse_cache_entry(&text).ok().filter(|e| e.key == key)
    }

    /// Writes to a temporary file in the cache directory and renames it
    /// into place.
    pub fn store(&self, key: &str, value: &Value) -> Result<CacheEntry, IoError> {
        let created_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let entry = CacheEntry {
            key: key.to_string(),
            created_at,
            value: value.clone(),
        };
        let err = |e: std::io::Error| IoError::Cache(e.to_string());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(err)?;
        tmp.write_all(to_canonical(&entry).as_bytes()).map_err(err)?;
        tmp.as_file().sync_all().map_err(err)?;
        tmp.persist(self.path(key)).map_err(|e| err(e.error))?;
        Ok(entry)
    }

    /// Cached value for `key`, computing and storing it on a miss. With
    /// `verify`, a hit is recomputed and must match byte for byte.
    pub fn get_or_compute<E: From<IoError>>(
        &self,
        key: &str,
        verify: bool,
        compute: impl FnOnce() -> Result<Value, E>,
    ) -> Result<(Value, CacheStatus), E> {
        match self.load(key) {
            Some(hit) if verify => {
                let fresh = compute()?;
                if to_canonical(&fresh) != to_canonical(&hit.value) {
                    return Err(IoError::CacheMismatch { key: key.to_string() }.into());
                }
                Ok((fresh, CacheStatus::Verified))
            }
            Some(hit) => Ok((hit.value, CacheStatus::Hit)),
            None => {
                let fresh = compute()?;
                self.store(key, &fresh)?;
                Ok((fresh, CacheStatus::Miss))
            }
        }
    }
}
