use super::{check_ainfty, cohomology, AInftyData, AInftyError, Chain};
use crate::coeff::Ring;
use std::collections::HashMap;

/// Directed subcategory on `order`: `hom(V_i, V_j)` is copied for `i < j`,
/// zero for `i > j`, and the line spanned by the chosen unit for `i = j`.
///
/// `units[i]` is a degree-zero cocycle in `hom(V_i, V_i)` representing the
/// cohomological unit. Outputs landing in an endomorphism space are projected
/// onto that line, which requires them to be multiples of the unit.
pub fn directed_subcategory<R: Ring>(
    b: &AInftyData<R>,
    order: &[usize],
    units: &[Chain<R>],
) -> Result<AInftyData<R>, AInftyError> {
    if order.len() != units.len() {
        return Err(AInftyError::InvalidArgument("one unit per object is required".into()));
    }
    let coh = cohomology(b)?;
    let obj = |i: usize| b.objects()[order[i]].clone();
    for (i, u) in units.iter().enumerate() {
        let v = order[i];
        if u.keys().any(|&g| b.generators()[g].source != v || b.generators()[g].target != v) {
            return Err(AInftyError::BadUnit(format!("unit of `{}` leaves its endomorphisms", obj(i))));
        }
        if !b.mu_chains(&[u.clone()]).is_empty() {
            return Err(AInftyError::BadUnit(format!("unit of `{}` is not closed", obj(i))));
        }
        let Some(e) = coh.unit(v) else {
            return Err(AInftyError::BadUnit(format!("`{}` has no cohomological unit", obj(i))));
        };
        if coh.class_of(v, v, u) != e {
            return Err(AInftyError::BadUnit(format!("cocycle for `{}` is not the unit class", obj(i))));
        }
    }

    let names: std::collections::HashSet<String> = b.generators().iter().map(|g| g.name.clone()).collect();
    let mut skel = AInftyData::<R>::builder().max_arity(b.max_arity());
    for i in 0..order.len() {
        skel = skel.object(&obj(i));
    }
    let mut image: HashMap<String, Chain<R>> = HashMap::new();
    let mut unit_name = Vec::new();
    for i in 0..order.len() {
        let mut name = format!("e_{}", obj(i));
        while names.contains(&name) {
            name.push('\'');
        }
        skel = skel.generator(&name, 0, &obj(i), &obj(i));
        image.insert(name.clone(), units[i].clone());
        unit_name.push(name);
        for j in i + 1..order.len() {
            for g in b.hom_basis(order[i], order[j]) {
                let gen = &b.generators()[g];
                skel = skel.generator(&gen.name, gen.degree, &obj(i), &obj(j));
                image.insert(gen.name.clone(), Chain::from([(g, R::one())]));
            }
        }
    }
    let shape = skel.clone().build()?;
    let mut full = skel;
    for k in 1..=b.max_arity() {
        for tuple in shape.composable_tuples(k) {
            let chains: Vec<Chain<R>> = tuple.iter().map(|&g| image[&shape.generators()[g].name].clone()).collect();
            let out = b.mu_chains(&chains);
            if out.is_empty() {
                continue;
            }
            let ins = shape.names(&tuple);
            let ins_ref: Vec<&str> = ins.iter().map(String::as_str).collect();
            let src = shape.generators()[tuple[k - 1]].source;
            let tgt = shape.generators()[tuple[0]].target;
            if src != tgt {
                for (g, c) in out {
                    full = full.entry(&ins_ref, &b.generators()[g].name, c);
                }
                continue;
            }
            let u = &units[src];
            let (g0, c0) = u.iter().next().ok_or_else(|| AInftyError::BadUnit("zero unit".into()))?;
            let lambda = out
                .get(g0)
                .cloned()
                .unwrap_or_else(R::zero)
                .times(&c0.try_inverse().ok_or_else(|| AInftyError::BadUnit("unit coefficient not invertible".into()))?);
            let mut rest = out.clone();
            for (g, c) in u {
                super::chain_add(&mut rest, *g, lambda.times(c).negate());
            }
            if !rest.is_empty() {
                return Err(AInftyError::BadUnit(format!(
                    "operation on units of `{}` leaves the unit line",
                    obj(src)
                )));
            }
            full = full.entry(&ins_ref, &unit_name[src], lambda);
        }
    }
    let out = full.build()?;
    let report = check_ainfty(&out);
    if !report.passed {
        return Err(AInftyError::DirectedNotAInfty(format!("{:?}", report.failure)));
    }
    Ok(out)
}
