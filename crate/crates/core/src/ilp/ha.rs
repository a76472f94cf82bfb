use super::{decode_solution, resident_types, solve_naive, IlpModel, Relation, VarRole};
use crate::error::{Error, Result};
use crate::model::{Instance, Matching};
use crate::stability::check_stability;

/// Model for instances where every hospital is indifferent among its applicants.
///
/// Variables are declared as `o_h`, `y_h` for every hospital, then `x_t{i}_h{h}` for every
/// type and hospital. Upper quotas above `n` behave as `n + 1`, which an open hospital can
/// never reach.
pub fn build_haqlu_model(inst: &Instance) -> Result<IlpModel> {
    if (0..inst.m()).any(|h| !inst.hospital_prefs(h).is_indifferent()) {
        return Err(Error::WrongVariant(
            "every hospital must be indifferent among its applicants".into(),
        ));
    }
    let n = inst.n() as i64;
    let hs: Vec<usize> = (0..inst.m()).collect();
    let mut model = IlpModel {
        types: resident_types(inst, None),
        ..Default::default()
    };
    let o: Vec<usize> = hs
        .iter()
        .map(|&h| model.add_var(format!("o_h{h}"), 0, 1, VarRole::Open(h)))
        .collect();
    let y: Vec<usize> = hs
        .iter()
        .map(|&h| model.add_var(format!("y_h{h}"), 0, 1, VarRole::Under(h)))
        .collect();
    let mut x = vec![vec![0usize; inst.m()]; model.types.len()];
    for i in 0..model.types.len() {
        for &h in &hs {
            let cnt = model.types[i].count() as i64;
            x[i][h] = model.add_var(
                format!("x_t{i}_h{h}"),
                0,
                cnt,
                VarRole::Assign { ty: i, hospital: h },
            );
        }
    }
    let types = model.types.clone();
    let q = types.len();
    let upper = |h: usize| inst.cap(h).min(inst.n() + 1) as i64;
    for &h in &hs {
        // Undersubscribed open hospitals must set y_h.
        let mut t: Vec<(usize, i64)> = (0..q).map(|i| (x[i][h], 1)).collect();
        t.push((y[h], n));
        t.push((o[h], -upper(h)));
        model.add(format!("under_h{h}"), &t, Relation::Ge, 0);
    }
    for (i, ty) in types.iter().enumerate() {
        for &h in hs.iter().filter(|&&h| ty.accepts(h)) {
            // Every resident of the type sits at h or somewhere at least as good, unless y_h = 0.
            let mut t: Vec<(usize, i64)> = ty
                .at_least_as_good(h, &hs)
                .into_iter()
                .map(|h2| (x[i][h2], 1))
                .collect();
            t.push((y[h], -n));
            model.add(
                format!("nobp_t{i}_h{h}"),
                &t,
                Relation::Ge,
                ty.count() as i64 - n,
            );
        }
    }
    for &h in &hs {
        // Residents accepting h but not placed at least as well form fewer than l(h) when h is
        // closed.
        let mut t = Vec::new();
        let mut wanting = 0i64;
        for (i, ty) in types.iter().enumerate().filter(|(_, ty)| ty.accepts(h)) {
            wanting += ty.count() as i64;
            t.extend(
                ty.at_least_as_good(h, &hs)
                    .into_iter()
                    .map(|h2| (x[i][h2], -1)),
            );
        }
        t.push((o[h], -n));
        model.add(
            format!("nobc_h{h}"),
            &t,
            Relation::Le,
            inst.lower(h) as i64 - 1 - wanting,
        );
    }
    for &h in &hs {
        let load: Vec<(usize, i64)> = (0..q).map(|i| (x[i][h], 1)).collect();
        let mut lo = load.clone();
        lo.push((o[h], -(inst.lower(h) as i64)));
        model.add(format!("lower_h{h}"), &lo, Relation::Ge, 0);
        let mut hi = load;
        hi.push((o[h], -upper(h)));
        model.add(format!("upper_h{h}"), &hi, Relation::Le, 0);
    }
    for (i, ty) in types.iter().enumerate() {
        let t: Vec<(usize, i64)> = hs.iter().map(|&h| (x[i][h], 1)).collect();
        model.add(format!("count_t{i}"), &t, Relation::Le, ty.count() as i64);
        for &h in hs.iter().filter(|&&h| !ty.accepts(h)) {
            model.add(format!("acc_t{i}_h{h}"), &[(x[i][h], 1)], Relation::Eq, 0);
        }
    }
    Ok(model)
}

/// Builds, solves and decodes the indifferent-hospital model.
pub fn solve_haqlu_ilp(inst: &Instance, node_budget: u64) -> Result<Option<Matching>> {
    let model = build_haqlu_model(inst)?;
    let Some(values) = solve_naive(&model, node_budget)? else {
        return Ok(None);
    };
    let m = decode_solution(inst, &model, &values)?;
    if !check_stability(inst, &m)?.stable {
        return Err(Error::InternalInvariant(
            "decoded matching is not stable".into(),
        ));
    }
    Ok(Some(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::f1;
    use crate::ilp::DEFAULT_NODE_BUDGET;

    #[test]
    fn f1_model_shape_and_verdict() {
        let inst = f1().as_house_allocation();
        let model = build_haqlu_model(&inst).unwrap();
        let q = model.types.len();
        assert_eq!(q, 3);
        assert_eq!(model.variables.len(), 3 * q + 3 + 3);
        assert_eq!(solve_haqlu_ilp(&inst, DEFAULT_NODE_BUDGET).unwrap(), None);
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::builder().build().unwrap();
        let model = build_haqlu_model(&inst).unwrap();
        assert!(model.variables.is_empty() && model.constraints.is_empty());
        assert_eq!(solve_naive(&model, 10).unwrap(), Some(vec![]));
    }

    #[test]
    fn forced_single_pair() {
        let inst = Instance::builder()
            .hospital("h", 1, Some(1))
            .resident("r", &["h"])
            .indifferent("h")
            .build()
            .unwrap();
        let model = build_haqlu_model(&inst).unwrap();
        let values = solve_naive(&model, 100).unwrap().unwrap();
        let get = |role| values[model.var(role).unwrap()];
        assert_eq!(get(VarRole::Assign { ty: 0, hospital: 0 }), 1);
        assert_eq!(get(VarRole::Open(0)), 1);
        assert_eq!(get(VarRole::Under(0)), 0);
    }

    #[test]
    fn empty_assignment_is_not_a_solution() {
        // A lone resident accepting a closed hospital with l = 1 is a blocking coalition.
        let inst = Instance::builder()
            .hospital("h", 1, Some(1))
            .resident("r", &["h"])
            .indifferent("h")
            .build()
            .unwrap();
        let model = build_haqlu_model(&inst).unwrap();
        let mut values = vec![0; model.variables.len()];
        assert!(!model.satisfied_by(&values));
        values[model.var(VarRole::Open(0)).unwrap()] = 1;
        values[model.var(VarRole::Assign { ty: 0, hospital: 0 }).unwrap()] = 1;
        assert!(model.satisfied_by(&values));
    }

    #[test]
    fn ranked_hospital_rejected() {
        assert!(matches!(
            build_haqlu_model(&f1()),
            Err(Error::WrongVariant(_))
        ));
    }
}
