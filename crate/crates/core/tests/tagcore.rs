//! The composition operations on the shipped elementary trees, built by hand.

use creole_tag::fstruct::{Bindings, FeatureValue};
use creole_tag::generator::surface;
use creole_tag::grammar::Grammar;
use creole_tag::tagcore::{
    finalize, linearize, replay, DerivedTree, FailureReason, GornAddress, TreeError,
};

struct Kit {
    g: Grammar,
    env: Bindings,
}

impl Kit {
    fn new() -> Self {
        Kit {
            g: Grammar::shipped(),
            env: Bindings::new(),
        }
    }

    fn tree(&mut self, name: &str) -> DerivedTree {
        DerivedTree::start(&self.g, name, &mut self.env).unwrap()
    }

    fn anchored(&mut self, name: &str, lemma: &str) -> Result<DerivedTree, TreeError> {
        let lx = self.g.entry(lemma).unwrap().lexeme();
        self.tree(name).graft_lexeme(&lx, &mut self.env)
    }

    /// Aspect and tense over a predicate lexeme, with `cadre` fixed.
    fn predicate(&mut self, lemma: &str, cadre: &str, asp: &str, tps: &str) -> Result<DerivedTree, TreeError> {
        let mut lx = self.g.entry(lemma).unwrap().lexeme();
        lx.features.insert("cadre", FeatureValue::atom(cadre));
        let pb = self.tree(asp).graft_lexeme(&lx, &mut self.env)?;
        self.tree(tps).graft_tree(&pb, &mut self.env)
    }

    fn gn(&mut self, det: &str, noun: &str) -> DerivedTree {
        let nbar = self.anchored("nbar", noun).unwrap();
        self.tree(det).substitute(&slot(det), &nbar, &mut self.env).unwrap()
    }

    fn text(&self, t: &DerivedTree) -> Result<String, TreeError> {
        let fin = finalize(&t.tree, &self.env)?;
        Ok(surface(&linearize(&fin)).unwrap())
    }
}

fn at(path: &[usize]) -> GornAddress {
    GornAddress(path.to_vec())
}

/// Address of the Nbar slot in a determiner tree.
fn slot(det: &str) -> GornAddress {
    match det {
        "det-gen" | "det-indef" => at(&[1]),
        d if d.contains("-pl") => at(&[1]),
        _ => at(&[0]),
    }
}

// ── Substitution ──

#[test]
fn determiners_by_substitution() {
    let mut k = Kit::new();
    let cases = [
        ("det-indef", "timanmay", "an timanmay"),
        ("det-gen", "timanmay", "timanmay"),
        ("det-def", "kay", "kay-la"),
        ("det-def", "pyébwa", "pyébwa-a"),
        ("det-def", "wonm", "wonm-lan"),
        ("det-def", "lajounen", "lajounen-an"),
        ("det-dem", "timanmay", "timanmay-tala"),
        ("det-def-pl", "timanmay", "sé-timanmay-la"),
    ];
    for (det, noun, want) in cases {
        let gn = k.gn(det, noun);
        assert_eq!(k.text(&gn).unwrap(), want);
    }
}

#[test]
fn free_determiner_needs_a_complemented_nbar() {
    let mut k = Kit::new();
    let nbar = k.anchored("nbar", "kay").unwrap();
    let e = k.tree("det-def-cpl").substitute(&at(&[0]), &nbar, &mut k.env).unwrap_err();
    assert!(matches!(e, TreeError::Failure { reason: FailureReason::Clash(_), .. }), "{:?}", e);
}

#[test]
fn substitution_checks_site() {
    let mut k = Kit::new();
    let nbar = k.anchored("nbar", "kay").unwrap();
    let gn = k.gn("det-indef", "liv");
    assert!(matches!(
        k.tree("det-def").substitute(&at(&[0]), &gn, &mut k.env),
        Err(TreeError::CategoryMismatch { .. })
    ));
    assert!(matches!(
        k.tree("det-def").substitute(&at(&[1]), &nbar, &mut k.env),
        Err(TreeError::KindMismatch { .. })
    ));
    assert!(matches!(
        k.tree("det-def").substitute(&at(&[7]), &nbar, &mut k.env),
        Err(TreeError::AddressInvalid(_))
    ));
}

// ── Grafting ──

#[test]
fn te_ka_domi() {
    let mut k = Kit::new();
    let pbb = k.predicate("dòmi", "intransitif", "asp-imperfectif", "tps-passe").unwrap();
    let subj = k.anchored("gn-predef", "mwen").unwrap();
    let s = k.tree("frame-intransitif").graft_tree(&pbb, &mut k.env).unwrap();
    let s = s.substitute(&at(&[0]), &subj, &mut k.env).unwrap();
    assert_eq!(k.text(&s).unwrap(), "mwen té ka dòmi");
}

#[test]
fn state_refuses_imperfective_tree() {
    let mut k = Kit::new();
    let e = k.predicate("gwo", "intransitif", "asp-imperfectif", "tps-unmarked").unwrap_err();
    assert!(matches!(e, TreeError::Failure { .. }), "{:?}", e);
    assert!(k.predicate("gwo", "intransitif", "asp-zero", "tps-passe").is_ok());
}

#[test]
fn frame_must_match_cadre() {
    let mut k = Kit::new();
    let pbb = k.predicate("ba", "attributif", "asp-perfectif", "tps-unmarked").unwrap();
    assert!(matches!(
        k.tree("frame-intransitif").graft_tree(&pbb, &mut k.env),
        Err(TreeError::Failure { .. })
    ));
    assert!(k.tree("frame-attributif").graft_tree(&pbb, &mut k.env).is_ok());
}

#[test]
fn grafting_needs_an_anchor() {
    let mut k = Kit::new();
    let lx = k.g.entry("kay").unwrap().lexeme();
    assert_eq!(
        k.tree("det-def").graft_lexeme(&lx, &mut k.env).unwrap_err(),
        TreeError::NoAnchor
    );
}

// ── Adjunction ──

#[test]
fn preposed_epithet() {
    let mut k = Kit::new();
    let epi = k.anchored("aux-epithet", "gwo").unwrap();
    let nbar = k.anchored("nbar", "pyébwa").unwrap();
    let nbar = nbar.adjoin(&GornAddress::root(), &epi, &mut k.env).unwrap();
    let gn = k.tree("det-def").substitute(&at(&[0]), &nbar, &mut k.env).unwrap();
    assert_eq!(k.text(&gn).unwrap(), "gwo pyébwa-a");
}

#[test]
fn non_epithet_state_cannot_be_an_epithet() {
    let mut k = Kit::new();
    assert!(k.anchored("aux-epithet", "las").is_err());
}

#[test]
fn dative_circumstant_on_a_saturated_clause() {
    let mut k = Kit::new();
    let pbb = k.predicate("palé", "intransitif", "asp-imperfectif", "tps-unmarked").unwrap();
    let ba = k.predicate("ba", "prep_datif", "asp-perfectif", "tps-unmarked").unwrap();
    let you = k.anchored("gn-predef", "ou").unwrap();
    let subj = k.anchored("gn-predef", "mwen").unwrap();
    let datif = k.tree("aux-prep-datif").graft_tree(&ba, &mut k.env).unwrap();
    let datif = datif.substitute(&at(&[1, 1]), &you, &mut k.env).unwrap();
    let s = k.tree("frame-intransitif").graft_tree(&pbb, &mut k.env).unwrap();
    let s = s.substitute(&at(&[0]), &subj, &mut k.env).unwrap();
    let s = s.adjoin(&at(&[1]), &datif, &mut k.env).unwrap();
    assert_eq!(k.text(&s).unwrap(), "mwen ka palé ba'w");

    // the same auxiliary cannot go on a node that is not a saturated GPred
    assert!(s.clone().adjoin(&GornAddress::root(), &datif, &mut k.env).is_err());

    let mut env = Bindings::new();
    let again = replay(&s.derivation, &k.g, &mut env).unwrap();
    assert_eq!(linearize(&finalize(&again, &env).unwrap()), linearize(&finalize(&s.tree, &k.env).unwrap()));
}

// ── Finalization ──

#[test]
fn open_slot_blocks_finalization() {
    let mut k = Kit::new();
    let pbb = k.predicate("dòmi", "intransitif", "asp-perfectif", "tps-unmarked").unwrap();
    let s = k.tree("frame-intransitif").graft_tree(&pbb, &mut k.env).unwrap();
    assert_eq!(k.text(&s).unwrap_err(), TreeError::UnfilledSlot(at(&[0])));
}

#[test]
fn unanchored_schema_blocks_finalization() {
    let k = Kit::new();
    let mut env = Bindings::new();
    let t = DerivedTree::start(&k.g, "nbar", &mut env).unwrap();
    assert!(finalize(&t.tree, &env).is_err());
}
