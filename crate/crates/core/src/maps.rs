//! Order-preserving maps between finite lattices, their compositions and the
//! projections onto the sup- and meet-preserving subfamilies.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::wedge::{WedgeKind, WedgeRelation};
use crate::witness::Value;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Carrier identity: pointer equality first, structural equality as the
/// fallback so reloaded lattices still compare.
pub(crate) fn same_lattice(a: &Arc<Lattice>, b: &Arc<Lattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct MonotoneMap {
    dom: Arc<Lattice>,
    cod: Arc<Lattice>,
    image: Vec<u32>,
}

impl PartialEq for MonotoneMap {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
            && same_lattice(&self.dom, &other.dom)
            && same_lattice(&self.cod, &other.cod)
    }
}

impl Eq for MonotoneMap {}

impl MonotoneMap {
    pub fn new(dom: &Arc<Lattice>, cod: &Arc<Lattice>, image: &[usize]) -> Result<MonotoneMap> {
        if image.len() != dom.n() {
            return Err(Error::InvalidInput(format!(
                "map image has {} entries for a {}-element domain",
                image.len(),
                dom.n()
            )));
        }
        for &v in image {
            if v >= cod.n() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    n: cod.n(),
                });
            }
        }
        // Covers generate the order, so checking them checks everything.
        for &(a, b) in dom.covers() {
            if !cod.leq(image[a], image[b]) {
                return Err(Error::NotMonotone { x: a, y: b });
            }
        }
        Ok(MonotoneMap {
            dom: dom.clone(),
            cod: cod.clone(),
            image: image.iter().map(|&v| v as u32).collect(),
        })
    }

    /// Caller guarantees monotonicity.
    fn raw(dom: &Arc<Lattice>, cod: &Arc<Lattice>, image: Vec<u32>) -> MonotoneMap {
        debug_assert!(dom
            .covers()
            .iter()
            .all(|&(a, b)| cod.leq(image[a] as usize, image[b] as usize)));
        MonotoneMap {
            dom: dom.clone(),
            cod: cod.clone(),
            image,
        }
    }

    pub fn identity(l: &Arc<Lattice>) -> MonotoneMap {
        MonotoneMap::raw(l, l, (0..l.n() as u32).collect())
    }

    pub fn constant(dom: &Arc<Lattice>, cod: &Arc<Lattice>, v: usize) -> Result<MonotoneMap> {
        if v >= cod.n() {
            return Err(Error::IndexOutOfRange {
                index: v,
                n: cod.n(),
            });
        }
        Ok(MonotoneMap::raw(dom, cod, vec![v as u32; dom.n()]))
    }

    pub fn const_bottom(dom: &Arc<Lattice>, cod: &Arc<Lattice>) -> Result<MonotoneMap> {
        let b = cod.bottom().ok_or(Error::NotALattice)?;
        MonotoneMap::constant(dom, cod, b)
    }

    pub fn const_top(dom: &Arc<Lattice>, cod: &Arc<Lattice>) -> Result<MonotoneMap> {
        let t = cod.top().ok_or(Error::NotALattice)?;
        MonotoneMap::constant(dom, cod, t)
    }

    /// Bottom to bottom, everything else to top. The top of the
    /// sup-preserving endomaps.
    pub fn sup_top(l: &Arc<Lattice>) -> Result<MonotoneMap> {
        l.require_lattice()?;
        let b = l.bottom().unwrap() as u32;
        let t = l.top().unwrap() as u32;
        let image = (0..l.n() as u32)
            .map(|x| if x == b { b } else { t })
            .collect();
        Ok(MonotoneMap::raw(l, l, image))
    }

    /// Top to top, everything else to bottom. The bottom of the
    /// meet-preserving endomaps.
    pub fn meet_bottom(l: &Arc<Lattice>) -> Result<MonotoneMap> {
        l.require_lattice()?;
        let b = l.bottom().unwrap() as u32;
        let t = l.top().unwrap() as u32;
        let image = (0..l.n() as u32)
            .map(|x| if x == t { t } else { b })
            .collect();
        Ok(MonotoneMap::raw(l, l, image))
    }

    /// Bottom to bottom, everything else to `a`.
    pub fn step(l: &Arc<Lattice>, a: usize) -> Result<MonotoneMap> {
        l.require_lattice()?;
        if a >= l.n() {
            return Err(Error::IndexOutOfRange { index: a, n: l.n() });
        }
        let b = l.bottom().unwrap() as u32;
        let image = (0..l.n() as u32)
            .map(|x| if x == b { b } else { a as u32 })
            .collect();
        Ok(MonotoneMap::raw(l, l, image))
    }

    pub fn dom(&self) -> &Arc<Lattice> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Lattice> {
        &self.cod
    }

    #[inline]
    pub fn get(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    pub fn image(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v as usize).collect()
    }

    pub(crate) fn image_raw(&self) -> &[u32] {
        &self.image
    }

    pub fn is_endo(&self) -> bool {
        same_lattice(&self.dom, &self.cod)
    }

    pub fn pointwise_leq(&self, other: &MonotoneMap) -> bool {
        debug_assert!(same_lattice(&self.dom, &other.dom));
        debug_assert!(same_lattice(&self.cod, &other.cod));
        self.image
            .iter()
            .zip(&other.image)
            .all(|(&a, &b)| self.cod.leq(a as usize, b as usize))
    }

    pub fn to_value(&self) -> Value {
        Value::Map {
            dom: self.dom.name().to_string(),
            cod: self.cod.name().to_string(),
            image: self.image(),
        }
    }
}

/// Plain composition g after f.
pub fn compose(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
    if !same_lattice(&f.cod, &g.dom) {
        return Err(Error::MixedCarriers);
    }
    let image = f.image.iter().map(|&b| g.image[b as usize]).collect();
    Ok(MonotoneMap::raw(&f.dom, &g.cod, image))
}

/// `(g . f)(a) = join { g(b) : b wedge-below f(a) }`.
pub fn compose_dot(g: &MonotoneMap, f: &MonotoneMap, w: &WedgeRelation) -> Result<MonotoneMap> {
    if w.kind() != WedgeKind::Wedge {
        return Err(Error::InvalidInput(
            "dot composition needs the wedge relation, not its dual".into(),
        ));
    }
    if !same_lattice(&f.cod, &g.dom) || !same_lattice(w.lattice(), &f.cod) {
        return Err(Error::MixedCarriers);
    }
    let cod = &g.cod;
    let bottom = cod.bottom().ok_or(Error::NotALattice)?;
    let image = (0..f.dom.n())
        .map(|a| {
            let mut acc = bottom;
            for b in w.below_iter(f.get(a)) {
                acc = cod.join_of(acc, g.get(b));
            }
            acc as u32
        })
        .collect();
    Ok(MonotoneMap::raw(&f.dom, cod, image))
}

/// `(g * f)(a) = meet { g(b) : b co-wedge-below f(a) }`.
pub fn compose_bullet(g: &MonotoneMap, f: &MonotoneMap, co: &WedgeRelation) -> Result<MonotoneMap> {
    if co.kind() != WedgeKind::CoWedge {
        return Err(Error::InvalidInput(
            "bullet composition needs the co relation, not the wedge".into(),
        ));
    }
    if !same_lattice(&f.cod, &g.dom) || !same_lattice(co.lattice(), &f.cod) {
        return Err(Error::MixedCarriers);
    }
    let cod = &g.cod;
    let top = cod.top().ok_or(Error::NotALattice)?;
    let image = (0..f.dom.n())
        .map(|a| {
            let mut acc = top;
            for b in co.below_iter(f.get(a)) {
                acc = cod.meet_of(acc, g.get(b));
            }
            acc as u32
        })
        .collect();
    Ok(MonotoneMap::raw(&f.dom, cod, image))
}

/// Two-relation form `join { c : c wedge-below g(b), b wedge-below f(a) }`;
/// collapses to `compose_dot` wherever the join identity holds.
pub fn compose_dot_definitional(
    g: &MonotoneMap,
    f: &MonotoneMap,
    w_mid: &WedgeRelation,
    w_cod: &WedgeRelation,
) -> Result<MonotoneMap> {
    if w_mid.kind() != WedgeKind::Wedge || w_cod.kind() != WedgeKind::Wedge {
        return Err(Error::InvalidInput(
            "definitional dot needs wedge relations".into(),
        ));
    }
    if !same_lattice(&f.cod, &g.dom)
        || !same_lattice(w_mid.lattice(), &f.cod)
        || !same_lattice(w_cod.lattice(), &g.cod)
    {
        return Err(Error::MixedCarriers);
    }
    let cod = &g.cod;
    let bottom = cod.bottom().ok_or(Error::NotALattice)?;
    let image = (0..f.dom.n())
        .map(|a| {
            let mut acc = bottom;
            for b in w_mid.below_iter(f.get(a)) {
                for c in w_cod.below_iter(g.get(b)) {
                    acc = cod.join_of(acc, c);
                }
            }
            acc as u32
        })
        .collect();
    Ok(MonotoneMap::raw(&f.dom, cod, image))
}

pub fn compose_bullet_definitional(
    g: &MonotoneMap,
    f: &MonotoneMap,
    co_mid: &WedgeRelation,
    co_cod: &WedgeRelation,
) -> Result<MonotoneMap> {
    if co_mid.kind() != WedgeKind::CoWedge || co_cod.kind() != WedgeKind::CoWedge {
        return Err(Error::InvalidInput(
            "definitional bullet needs co relations".into(),
        ));
    }
    if !same_lattice(&f.cod, &g.dom)
        || !same_lattice(co_mid.lattice(), &f.cod)
        || !same_lattice(co_cod.lattice(), &g.cod)
    {
        return Err(Error::MixedCarriers);
    }
    let cod = &g.cod;
    let top = cod.top().ok_or(Error::NotALattice)?;
    let image = (0..f.dom.n())
        .map(|a| {
            let mut acc = top;
            for b in co_mid.below_iter(f.get(a)) {
                for c in co_cod.below_iter(g.get(b)) {
                    acc = cod.meet_of(acc, c);
                }
            }
            acc as u32
        })
        .collect();
    Ok(MonotoneMap::raw(&f.dom, cod, image))
}

/// Sup-projection `psi(f)(a) = join { f(s) : s wedge-below a }`. The wedge
/// relation lives on the domain of `f`.
pub fn psi(f: &MonotoneMap, w: &WedgeRelation) -> Result<MonotoneMap> {
    if w.kind() != WedgeKind::Wedge {
        return Err(Error::InvalidInput("psi needs the wedge relation".into()));
    }
    if !same_lattice(w.lattice(), &f.dom) {
        return Err(Error::MixedCarriers);
    }
    let bottom = f.cod.bottom().ok_or(Error::NotALattice)?;
    let image = (0..f.dom.n())
        .map(|a| {
            let mut acc = bottom;
            for s in w.below_iter(a) {
                acc = f.cod.join_of(acc, f.get(s));
            }
            acc as u32
        })
        .collect();
    Ok(MonotoneMap::raw(&f.dom, &f.cod, image))
}

/// Meet-projection `phi(f)(a) = meet { f(s) : s co-wedge-below a }`.
pub fn phi(f: &MonotoneMap, co: &WedgeRelation) -> Result<MonotoneMap> {
    if co.kind() != WedgeKind::CoWedge {
        return Err(Error::InvalidInput("phi needs the co relation".into()));
    }
    if !same_lattice(co.lattice(), &f.dom) {
        return Err(Error::MixedCarriers);
    }
    let top = f.cod.top().ok_or(Error::NotALattice)?;
    let image = (0..f.dom.n())
        .map(|a| {
            let mut acc = top;
            for s in co.below_iter(a) {
                acc = f.cod.meet_of(acc, f.get(s));
            }
            acc as u32
        })
        .collect();
    Ok(MonotoneMap::raw(&f.dom, &f.cod, image))
}

/// Two-relation form of `psi`, as an independent cross-check.
pub fn psi_definitional(
    f: &MonotoneMap,
    w_dom: &WedgeRelation,
    w_cod: &WedgeRelation,
) -> Result<MonotoneMap> {
    if w_dom.kind() != WedgeKind::Wedge || w_cod.kind() != WedgeKind::Wedge {
        return Err(Error::InvalidInput(
            "definitional psi needs wedge relations".into(),
        ));
    }
    if !same_lattice(w_dom.lattice(), &f.dom) || !same_lattice(w_cod.lattice(), &f.cod) {
        return Err(Error::MixedCarriers);
    }
    let bottom = f.cod.bottom().ok_or(Error::NotALattice)?;
    let image = (0..f.dom.n())
        .map(|a| {
            let mut acc = bottom;
            for s in w_dom.below_iter(a) {
                for b in w_cod.below_iter(f.get(s)) {
                    acc = f.cod.join_of(acc, b);
                }
            }
            acc as u32
        })
        .collect();
    Ok(MonotoneMap::raw(&f.dom, &f.cod, image))
}

pub fn phi_definitional(
    f: &MonotoneMap,
    co_dom: &WedgeRelation,
    co_cod: &WedgeRelation,
) -> Result<MonotoneMap> {
    if co_dom.kind() != WedgeKind::CoWedge || co_cod.kind() != WedgeKind::CoWedge {
        return Err(Error::InvalidInput(
            "definitional phi needs co relations".into(),
        ));
    }
    if !same_lattice(co_dom.lattice(), &f.dom) || !same_lattice(co_cod.lattice(), &f.cod) {
        return Err(Error::MixedCarriers);
    }
    let top = f.cod.top().ok_or(Error::NotALattice)?;
    let image = (0..f.dom.n())
        .map(|a| {
            let mut acc = top;
            for s in co_dom.below_iter(a) {
                for b in co_cod.below_iter(f.get(s)) {
                    acc = f.cod.meet_of(acc, b);
                }
            }
            acc as u32
        })
        .collect();
    Ok(MonotoneMap::raw(&f.dom, &f.cod, image))
}

/// Pointwise join; the empty family gives the constant-bottom map.
pub fn pointwise_join<'a>(
    dom: &Arc<Lattice>,
    cod: &Arc<Lattice>,
    maps: impl IntoIterator<Item = &'a MonotoneMap>,
) -> Result<MonotoneMap> {
    let mut acc = MonotoneMap::const_bottom(dom, cod)?;
    for f in maps {
        if !same_lattice(&f.dom, dom) || !same_lattice(&f.cod, cod) {
            return Err(Error::MixedCarriers);
        }
        for (a, v) in acc.image.iter_mut().enumerate() {
            *v = cod.join_of(*v as usize, f.get(a)) as u32;
        }
    }
    Ok(acc)
}

/// Pointwise meet; the empty family gives the constant-top map.
pub fn pointwise_meet<'a>(
    dom: &Arc<Lattice>,
    cod: &Arc<Lattice>,
    maps: impl IntoIterator<Item = &'a MonotoneMap>,
) -> Result<MonotoneMap> {
    let mut acc = MonotoneMap::const_top(dom, cod)?;
    for f in maps {
        if !same_lattice(&f.dom, dom) || !same_lattice(&f.cod, cod) {
            return Err(Error::MixedCarriers);
        }
        for (a, v) in acc.image.iter_mut().enumerate() {
            *v = cod.meet_of(*v as usize, f.get(a)) as u32;
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MapClass {
    pub sup_preserving: bool,
    pub meet_preserving: bool,
}

/// Empty and binary joins/meets determine all finite ones.
pub fn classify(f: &MonotoneMap) -> Result<MapClass> {
    f.dom.require_lattice()?;
    f.cod.require_lattice()?;
    let n = f.dom.n();
    let mut sup = f.get(f.dom.bottom().unwrap()) == f.cod.bottom().unwrap();
    let mut meet = f.get(f.dom.top().unwrap()) == f.cod.top().unwrap();
    for x in 0..n {
        if !sup && !meet {
            break;
        }
        for y in x + 1..n {
            if sup && f.get(f.dom.join_of(x, y)) != f.cod.join_of(f.get(x), f.get(y)) {
                sup = false;
            }
            if meet && f.get(f.dom.meet_of(x, y)) != f.cod.meet_of(f.get(x), f.get(y)) {
                meet = false;
            }
            if !sup && !meet {
                break;
            }
        }
    }
    Ok(MapClass {
        sup_preserving: sup,
        meet_preserving: meet,
    })
}

/// All monotone maps dom -> cod, image tuples in lexicographic order along
/// the domain's linear extension. Errors out once more than `cap` maps exist.
pub fn enumerate_between(
    dom: &Arc<Lattice>,
    cod: &Arc<Lattice>,
    cap: usize,
) -> Result<Vec<MonotoneMap>> {
    dom.require_lattice()?;
    cod.require_lattice()?;
    let order = dom.linext().to_vec();
    let n = dom.n();
    // Predecessors in assignment order that are below the element; only they
    // constrain its value.
    let earlier: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let e = order[i];
            order[..i]
                .iter()
                .copied()
                .filter(|&ep| dom.leq(ep, e))
                .collect()
        })
        .collect();

    struct Ctx<'a> {
        order: &'a [usize],
        earlier: &'a [Vec<usize>],
        cod: &'a Lattice,
        cap: usize,
    }

    fn rec(ctx: &Ctx, i: usize, val: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) -> Result<()> {
        if i == ctx.order.len() {
            if out.len() == ctx.cap {
                return Err(Error::SizeLimitExceeded {
                    what: "monotone map enumeration".into(),
                    limit: ctx.cap,
                    needed: ctx.cap + 1,
                });
            }
            out.push(val.clone());
            return Ok(());
        }
        let e = ctx.order[i];
        'vals: for v in 0..ctx.cod.n() {
            for &ep in &ctx.earlier[i] {
                if !ctx.cod.leq(val[ep] as usize, v) {
                    continue 'vals;
                }
            }
            val[e] = v as u32;
            rec(ctx, i + 1, val, out)?;
        }
        Ok(())
    }

    let ctx = Ctx {
        order: &order,
        earlier: &earlier,
        cod: cod.as_ref(),
        cap,
    };
    let mut out = Vec::new();
    let mut val = vec![0u32; n];
    rec(&ctx, 0, &mut val, &mut out)?;
    Ok(out
        .into_iter()
        .map(|image| MonotoneMap::raw(dom, cod, image))
        .collect())
}

pub fn enumerate_endo(l: &Arc<Lattice>, cap: usize) -> Result<Vec<MonotoneMap>> {
    enumerate_between(l, l, cap)
}

/// Random monotone endomaps. Sweeps a linear extension assigning each element
/// a uniform value above the join of its lower covers' values; every monotone
/// map gets positive probability, though not uniformly.
pub struct Sampler {
    l: Arc<Lattice>,
    order: Vec<usize>,
    lower: Vec<Vec<usize>>,
    upsets: Vec<Vec<u32>>,
}

impl Sampler {
    pub fn new(l: &Arc<Lattice>) -> Result<Sampler> {
        l.require_lattice()?;
        let n = l.n();
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in l.covers() {
            lower[b].push(a);
        }
        let upsets = (0..n)
            .map(|m| (0..n).filter(|&v| l.leq(m, v)).map(|v| v as u32).collect())
            .collect();
        Ok(Sampler {
            l: l.clone(),
            order: l.linext().to_vec(),
            lower,
            upsets,
        })
    }

    pub fn draw(&self, rng: &mut impl Rng) -> MonotoneMap {
        let n = self.l.n();
        let mut val = vec![0u32; n];
        for &e in &self.order {
            let mut floor = self.l.bottom().expect("sampler requires a lattice");
            for &c in &self.lower[e] {
                floor = self.l.join_of(floor, val[c] as usize);
            }
            let ups = &self.upsets[floor];
            val[e] = ups[rng.gen_range(0..ups.len())];
        }
        MonotoneMap::raw(&self.l, &self.l, val)
    }
}

pub fn sample_monotone(l: &Arc<Lattice>, seed: u64) -> Result<MonotoneMap> {
    let sampler = Sampler::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sampler.draw(&mut rng))
}
