//! Formula transformations behind the normal-form and paramodulation
//! agents.

use holboard_core::index::{subterm_at, Position, Step};
use holboard_core::normalize::{beta_normalize, NormalizeError};
use holboard_core::{Arg, ConstId, Kernel, Spine, Strategy, TermNode, TermRef, TypeRef};
use thiserror::Error;

use crate::logic::{self, shape, Shape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("expected a formula of type o")]
    NotAFormula,
    #[error("formula is not in negation normal form")]
    NotInNnf,
    #[error("expected an equation")]
    NotAnEquation,
    #[error("subterm at {0} is not the equation's left-hand side")]
    PositionMismatch(String),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

fn formula(k: &Kernel, f: &TermRef) -> Result<TermRef, TransformError> {
    if !logic::is_bool(f) {
        return Err(TransformError::NotAFormula);
    }
    Ok(beta_normalize(k, f, Strategy::SS)?.0)
}

/// Exhaustive simplification with the rules
/// `¬¬A→A, A∧⊤→A, A∧⊥→⊥, A∨⊤→⊤, A∨⊥→A, A⇒A→⊤, A∧A→A, A∨A→A, ¬⊤→⊥,
/// ¬⊥→⊤, t=t→⊤` (∧ and ∨ rules apply on either side).
pub fn simplify(k: &Kernel, f: &TermRef) -> Result<TermRef, TransformError> {
    let f = formula(k, f)?;
    Ok(simp(k, &f))
}

fn simp(k: &Kernel, f: &TermRef) -> TermRef {
    match shape(k, f) {
        Shape::Not(a) => {
            let a = simp(k, &a);
            match shape(k, &a) {
                Shape::Not(b) => b,
                Shape::True => logic::bot(k),
                Shape::False => logic::top(k),
                _ => logic::not(k, a),
            }
        }
        Shape::And(a, b) => {
            let (a, b) = (simp(k, &a), simp(k, &b));
            match (shape(k, &a), shape(k, &b)) {
                (Shape::False, _) | (_, Shape::False) => logic::bot(k),
                (Shape::True, _) => b,
                (_, Shape::True) => a,
                _ if a == b => a,
                _ => logic::and(k, a, b),
            }
        }
        Shape::Or(a, b) => {
            let (a, b) = (simp(k, &a), simp(k, &b));
            match (shape(k, &a), shape(k, &b)) {
                (Shape::True, _) | (_, Shape::True) => logic::top(k),
                (Shape::False, _) => b,
                (_, Shape::False) => a,
                _ if a == b => a,
                _ => logic::or(k, a, b),
            }
        }
        Shape::Implies(a, b) => {
            let (a, b) = (simp(k, &a), simp(k, &b));
            if a == b {
                logic::top(k)
            } else {
                logic::implies(k, a, b)
            }
        }
        Shape::Eq(ty, a, b) => {
            let (a, b) = if logic::is_bool(&a) { (simp(k, &a), simp(k, &b)) } else { (a, b) };
            if a == b {
                logic::top(k)
            } else {
                logic::eq(k, ty, a, b)
            }
        }
        Shape::Forall(ty, body) => logic::forall(k, ty, simp(k, &body)),
        Shape::Exists(ty, body) => logic::exists(k, ty, simp(k, &body)),
        Shape::True | Shape::False | Shape::Atom => f.clone(),
    }
}

/// Negation normal form: `⇒` and `=` at type `o` are expanded, negations
/// pushed down to atoms through De Morgan and the quantifier dualities.
pub fn nnf(k: &Kernel, f: &TermRef) -> Result<TermRef, TransformError> {
    let f = formula(k, f)?;
    Ok(nnf_pos(k, &f, true))
}

fn nnf_pos(k: &Kernel, f: &TermRef, positive: bool) -> TermRef {
    let lit = |t: TermRef| if positive { t } else { logic::not(k, t) };
    match shape(k, f) {
        Shape::Not(a) => nnf_pos(k, &a, !positive),
        Shape::True => if positive { logic::top(k) } else { logic::bot(k) },
        Shape::False => if positive { logic::bot(k) } else { logic::top(k) },
        Shape::And(a, b) => junction(k, nnf_pos(k, &a, positive), nnf_pos(k, &b, positive), positive),
        Shape::Or(a, b) => junction(k, nnf_pos(k, &a, positive), nnf_pos(k, &b, positive), !positive),
        Shape::Implies(a, b) => junction(k, nnf_pos(k, &a, !positive), nnf_pos(k, &b, positive), !positive),
        Shape::Eq(_, a, b) if logic::is_bool(&a) => {
            // a ↔ b is (¬a ∨ b) ∧ (a ∨ ¬b); its negation (a ∧ ¬b) ∨ (¬a ∧ b)
            let (pa, na) = (nnf_pos(k, &a, true), nnf_pos(k, &a, false));
            let (pb, nb) = (nnf_pos(k, &b, true), nnf_pos(k, &b, false));
            if positive {
                logic::and(k, logic::or(k, na, pb), logic::or(k, pa, nb))
            } else {
                logic::or(k, logic::and(k, pa, nb), logic::and(k, na, pb))
            }
        }
        Shape::Forall(ty, body) => quantifier(k, ty, nnf_pos(k, &body, positive), positive),
        Shape::Exists(ty, body) => quantifier(k, ty, nnf_pos(k, &body, positive), !positive),
        Shape::Eq(..) | Shape::Atom => lit(f.clone()),
    }
}

fn junction(k: &Kernel, a: TermRef, b: TermRef, conjunction: bool) -> TermRef {
    if conjunction {
        logic::and(k, a, b)
    } else {
        logic::or(k, a, b)
    }
}

fn quantifier(k: &Kernel, ty: TypeRef, body: TermRef, universal: bool) -> TermRef {
    if universal {
        logic::forall(k, ty, body)
    } else {
        logic::exists(k, ty, body)
    }
}

/// Whether `f` is in negation normal form: no `⇒`, no `=` at type `o`
/// and negation only directly above atoms.
pub fn is_nnf(k: &Kernel, f: &TermRef) -> bool {
    match shape(k, f) {
        Shape::Not(a) => matches!(shape(k, &a), Shape::Atom) || matches!(shape(k, &a), Shape::Eq(_, l, _) if !logic::is_bool(&l)),
        Shape::Implies(..) => false,
        Shape::Eq(_, a, _) => !logic::is_bool(&a),
        Shape::And(a, b) | Shape::Or(a, b) => is_nnf(k, &a) && is_nnf(k, &b),
        Shape::Forall(_, b) | Shape::Exists(_, b) => is_nnf(k, &b),
        Shape::True | Shape::False | Shape::Atom => true,
    }
}

/// Whether `f` is a quantifier prefix around a quantifier-free matrix.
pub fn is_prenex(k: &Kernel, f: &TermRef) -> bool {
    match shape(k, f) {
        Shape::Forall(_, b) | Shape::Exists(_, b) => is_prenex(k, &b),
        _ => quantifier_free(k, f),
    }
}

fn quantifier_free(k: &Kernel, f: &TermRef) -> bool {
    match shape(k, f) {
        Shape::Forall(..) | Shape::Exists(..) => false,
        Shape::Not(a) => quantifier_free(k, &a),
        Shape::And(a, b) | Shape::Or(a, b) | Shape::Implies(a, b) => quantifier_free(k, &a) && quantifier_free(k, &b),
        Shape::Eq(_, a, b) if logic::is_bool(&a) => quantifier_free(k, &a) && quantifier_free(k, &b),
        _ => true,
    }
}

type Prefix = Vec<(bool, TypeRef)>;

/// Prenex form of an NNF formula. Quantifiers of the left operand of a
/// junction end up outside those of the right operand.
pub fn prenex(k: &Kernel, f: &TermRef) -> Result<TermRef, TransformError> {
    let f = formula(k, f)?;
    if !is_nnf(k, &f) {
        return Err(TransformError::NotInNnf);
    }
    let (prefix, matrix) = pull(k, &f);
    Ok(prefix
        .into_iter()
        .rev()
        .fold(matrix, |body, (universal, ty)| quantifier(k, ty, body, universal)))
}

fn pull(k: &Kernel, f: &TermRef) -> (Prefix, TermRef) {
    match shape(k, f) {
        Shape::Forall(ty, body) | Shape::Exists(ty, body) => {
            let universal = matches!(shape(k, f), Shape::Forall(..));
            let (mut prefix, matrix) = pull(k, &body);
            prefix.insert(0, (universal, ty));
            (prefix, matrix)
        }
        Shape::And(a, b) | Shape::Or(a, b) => {
            let conjunction = matches!(shape(k, f), Shape::And(..));
            let (pa, ma) = pull(k, &a);
            let (pb, mb) = pull(k, &b);
            let (na, nb) = (pa.len() as u32, pb.len() as u32);
            let ma = logic::shift(k, &ma, nb);
            let mb = logic::shift_above(k, &mb, nb, na);
            let mut prefix = pa;
            prefix.extend(pb);
            (prefix, junction(k, ma, mb, conjunction))
        }
        _ => (Vec::new(), f.clone()),
    }
}

/// Replaces every existential of an NNF formula by a fresh Skolem symbol
/// applied to the universal variables in scope. Returns the new symbols.
pub fn skolemize(k: &Kernel, f: &TermRef) -> Result<(TermRef, Vec<TermRef>), TransformError> {
    let f = formula(k, f)?;
    if !is_nnf(k, &f) {
        return Err(TransformError::NotInNnf);
    }
    let mut fresh = Vec::new();
    let out = sk(k, &f, &mut Vec::new(), &mut fresh);
    Ok((out, fresh))
}

fn sk(k: &Kernel, f: &TermRef, universals: &mut Vec<TypeRef>, fresh: &mut Vec<TermRef>) -> TermRef {
    match shape(k, f) {
        Shape::Forall(ty, body) => {
            universals.push(ty.clone());
            let body = sk(k, &body, universals, fresh);
            universals.pop();
            logic::forall(k, ty, body)
        }
        Shape::Exists(ty, body) => {
            let sym_ty = k.types().arrows(universals.iter().cloned(), ty);
            let id = k.signature_mut().fresh_skolem(sym_ty);
            let sym = k.constant(id);
            fresh.push(sym.clone());
            let n = universals.len() as u32;
            let args: Vec<TermRef> = universals
                .iter()
                .enumerate()
                .map(|(j, t)| k.bound(n - j as u32, t.clone()).expect("index ≥ 1"))
                .collect();
            let witness = k.apply(&sym, &args).expect("typed");
            let body = logic::instantiate(k, &body, &witness);
            sk(k, &body, universals, fresh)
        }
        Shape::And(a, b) => logic::and(k, sk(k, &a, universals, fresh), sk(k, &b, universals, fresh)),
        Shape::Or(a, b) => logic::or(k, sk(k, &a, universals, fresh), sk(k, &b, universals, fresh)),
        _ => f.clone(),
    }
}

/// The left-hand side, right-hand side and type of an equation.
pub fn equation_sides(k: &Kernel, eq: &TermRef) -> Option<(TypeRef, TermRef, TermRef)> {
    match shape(k, eq) {
        Shape::Eq(ty, l, r) => Some((ty, l, r)),
        _ => None,
    }
}

/// Rewrites the occurrence of `l` at `pos` in `target` with `r`, for the
/// equation `l = r`.
pub fn paramodulate(k: &Kernel, eq: &TermRef, target: &TermRef, pos: &Position) -> Result<TermRef, TransformError> {
    let (_, l, r) = equation_sides(k, eq).ok_or(TransformError::NotAnEquation)?;
    match subterm_at(target, pos) {
        Some(s) if s == l => {}
        _ => return Err(TransformError::PositionMismatch(pos.to_string())),
    }
    Ok(replace_at(k, target, &pos.0, &r, 0))
}

fn replace_at(k: &Kernel, t: &TermRef, path: &[Step], r: &TermRef, depth: u32) -> TermRef {
    let Some((step, rest)) = path.split_first() else {
        return logic::shift(k, r, depth);
    };
    match (t.node(), step) {
        (TermNode::Abs(ty, b), Step::IntoAbstractionBody) => k.abs(ty.clone(), replace_at(k, b, rest, r, depth + 1)),
        (TermNode::TypeAbs(b), Step::IntoTypeAbstractionBody) => k.type_abs(replace_at(k, b, rest, r, depth)),
        (TermNode::Root(_, sp) | TermNode::Redex(_, sp), Step::SpineArg(n)) => {
            let mut args: Vec<Arg> = sp.args().to_vec();
            let i = *n as usize - 1;
            if let Arg::Term(u) = &args[i] {
                args[i] = Arg::Term(replace_at(k, u, rest, r, depth));
            }
            let node = match t.node() {
                TermNode::Root(h, _) => TermNode::Root(h.clone(), Spine::new(args)),
                TermNode::Redex(f, _) => TermNode::Redex(f.clone(), Spine::new(args)),
                _ => unreachable!("matched above"),
            };
            k.intern(node).expect("same types")
        }
        _ => unreachable!("position checked against the target"),
    }
}

/// Positions of `l` in `target`, preorder.
pub fn occurrences_of(target: &TermRef, l: &TermRef) -> Vec<Position> {
    holboard_core::index::subterms(target)
        .into_iter()
        .filter(|(s, _)| s == l)
        .map(|(_, p)| p)
        .collect()
}

/// Number of existential quantifiers in `f`.
pub fn existentials(f: &TermRef) -> usize {
    logic::count_const(f, ConstId::SIGMA)
}

#[cfg(test)]
mod tests {
    use super::*;
    use holboard_core::tptp::{parse_expr, Dialect, Elaborator};

    fn setup() -> Kernel {
        let k = Kernel::new();
        let tb = k.types();
        let i = tb.individual();
        let o = tb.bool();
        for n in ["p", "q", "r"] {
            k.declare(n, o.clone()).unwrap();
        }
        k.declare("pi", tb.arrow(i.clone(), o.clone())).unwrap();
        k.declare("ri", tb.arrow(i.clone(), o.clone())).unwrap();
        k.declare("r2", tb.arrows([i.clone(), i.clone()], o.clone())).unwrap();
        k.declare("q3", tb.arrows([i.clone(), i.clone(), i.clone()], o.clone())).unwrap();
        k.declare("pp", tb.arrow(i.clone(), o.clone())).unwrap();
        k.declare("qq", tb.arrows([i.clone(), i.clone()], o)).unwrap();
        k.declare("a", i.clone()).unwrap();
        k.declare("b", i.clone()).unwrap();
        k.declare("c", i.clone()).unwrap();
        k.declare("d", i.clone()).unwrap();
        k.declare("f", tb.arrow(i.clone(), i)).unwrap();
        k
    }

    fn thf(k: &Kernel, s: &str) -> TermRef {
        let e = parse_expr(s, Dialect::Thf).unwrap();
        Elaborator::new(k).strict(true).term(&e, Dialect::Thf, Some(&k.types().bool())).unwrap()
    }

    #[test]
    fn simplification_rules() {
        let k = setup();
        for (input, want) in [
            ("~ ~ p", "p"),
            ("p & $true", "p"),
            ("$true & p", "p"),
            ("p & $false", "$false"),
            ("p | $true", "$true"),
            ("p | $false", "p"),
            ("p => p", "$true"),
            ("p & p", "p"),
            ("p | p", "p"),
            ("~ $true", "$false"),
            ("~ $false", "$true"),
            ("a = a", "$true"),
            ("(q | $false) & ~ ~ q", "q"),
            ("! [X: $i]: (pi @ X | $true)", "! [X: $i]: $true"),
        ] {
            assert_eq!(simplify(&k, &thf(&k, input)).unwrap(), thf(&k, want), "{input}");
        }
        let a = k.const_named("a").unwrap();
        assert_eq!(simplify(&k, &a), Err(TransformError::NotAFormula));
    }

    #[test]
    fn negation_normal_form() {
        let k = setup();
        for (input, want) in [
            ("~ (p & q)", "~ p | ~ q"),
            ("~ (! [X: $i]: (pi @ X))", "? [X: $i]: ~ (pi @ X)"),
            ("~ (p => (q | r))", "p & (~ q & ~ r)"),
            ("p = q", "(~ p | q) & (p | ~ q)"),
            ("~ (a = b)", "~ (a = b)"),
        ] {
            let out = nnf(&k, &thf(&k, input)).unwrap();
            assert_eq!(out, thf(&k, want), "{input}");
            assert!(is_nnf(&k, &out));
        }
        assert!(!is_nnf(&k, &thf(&k, "~ (p & q)")));
        assert!(!is_nnf(&k, &thf(&k, "p => q")));
    }

    #[test]
    fn prenex_form() {
        let k = setup();
        for (input, want) in [
            ("(! [X: $i]: (pi @ X)) & q", "! [X: $i]: ((pi @ X) & q)"),
            ("(! [X: $i]: (pi @ X)) & (? [Y: $i]: (ri @ Y))", "! [X: $i]: ? [Y: $i]: ((pi @ X) & (ri @ Y))"),
            ("p | q", "p | q"),
            (
                "(! [X: $i]: ? [Y: $i]: (r2 @ X @ Y)) | (! [Z: $i]: (pi @ Z))",
                "! [X: $i]: ? [Y: $i]: ! [Z: $i]: ((r2 @ X @ Y) | (pi @ Z))",
            ),
            (
                "! [X: $i]: ((pi @ X) & (! [Y: $i]: (r2 @ X @ Y)))",
                "! [X: $i]: ! [Y: $i]: ((pi @ X) & (r2 @ X @ Y))",
            ),
            (
                "! [X: $i]: ((! [Y: $i]: (r2 @ X @ Y)) & (pi @ X))",
                "! [X: $i]: ! [Y: $i]: ((r2 @ X @ Y) & (pi @ X))",
            ),
        ] {
            let out = prenex(&k, &thf(&k, input)).unwrap();
            assert_eq!(out, thf(&k, want), "{input}");
            assert!(is_prenex(&k, &out));
        }
        assert_eq!(prenex(&k, &thf(&k, "p => q")), Err(TransformError::NotInNnf));
    }

    #[test]
    fn skolemization() {
        let k = setup();
        let (out, fresh) = skolemize(&k, &thf(&k, "? [X: $i]: (pi @ X)")).unwrap();
        assert_eq!(fresh.len(), 1);
        assert_eq!(out, thf(&k, "pi @ sk1"));
        let (out, fresh) = skolemize(&k, &thf(&k, "! [X: $i]: ? [Y: $i]: (r2 @ X @ Y)")).unwrap();
        assert_eq!(fresh.len(), 1);
        assert_eq!(out, thf(&k, "! [X: $i]: (r2 @ X @ (sk2 @ X))"));
        let (out, fresh) = skolemize(&k, &thf(&k, "! [X: $i, Y: $i]: ? [Z: $i]: (q3 @ X @ Y @ Z)")).unwrap();
        let tb = k.types();
        let i = tb.individual();
        assert_eq!(fresh[0].ty(), &tb.arrows([i.clone(), i.clone()], i));
        assert_eq!(out, thf(&k, "! [X: $i, Y: $i]: (q3 @ X @ Y @ (sk3 @ X @ Y))"));
        assert_eq!(existentials(&out), 0);
    }

    #[test]
    fn paramodulation() {
        let k = setup();
        let pa = thf(&k, "pi @ a");
        let ab = thf(&k, "a = b");
        let pos = Position(vec![Step::SpineArg(1)]);
        assert_eq!(paramodulate(&k, &ab, &pa, &pos).unwrap(), thf(&k, "pi @ b"));
        let aa = thf(&k, "a = a");
        assert_eq!(paramodulate(&k, &aa, &pa, &pos).unwrap(), pa);

        let eq = thf(&k, "(f @ c) = d");
        let target = thf(&k, "qq @ (f @ c) @ (f @ c)");
        let occ = occurrences_of(&target, &thf_term(&k, "f @ c"));
        assert_eq!(occ.len(), 2);
        let out = paramodulate(&k, &eq, &target, &Position(vec![Step::SpineArg(2)])).unwrap();
        assert_eq!(out, thf(&k, "qq @ (f @ c) @ d"));
        assert!(matches!(paramodulate(&k, &eq, &pa, &pos), Err(TransformError::PositionMismatch(_))));
        assert_eq!(paramodulate(&k, &pa, &pa, &pos), Err(TransformError::NotAnEquation));
    }

    fn thf_term(k: &Kernel, s: &str) -> TermRef {
        let e = parse_expr(s, Dialect::Thf).unwrap();
        Elaborator::new(k).strict(true).term(&e, Dialect::Thf, None).unwrap()
    }
}
