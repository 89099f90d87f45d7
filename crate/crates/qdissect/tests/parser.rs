use qdissect::parser::parse_product;
use qdissect_core::verify::builtin_catalog;

#[test]
fn catalog_specs_round_trip() {
    for claim in builtin_catalog() {
        let text = claim.spec.to_string();
        let parsed = parse_product(&text).unwrap_or_else(|e| panic!("{}: {e}", claim.id));
        assert_eq!(parsed, claim.spec, "{}: {text}", claim.id);
        assert_eq!(parsed.to_string(), text, "{}", claim.id);
    }
}

#[test]
fn whitespace_and_defaults_normalize() {
    let spec = parse_product("  ( q , q^4 ; q^5 )   (-q^6, -q^9;q^15)^2 ").unwrap();
    assert_eq!(spec.to_string(), "(q,q^4;q^5) (-q^6,-q^9;q^15)^2");
    // A bare q means exponent one on both sides of the comma.
    let spec = parse_product("(q,q^1;q^2)").unwrap();
    assert_eq!(spec.to_string(), "(q,q;q^2)");
    assert_eq!(spec, parse_product("(q,q;q^2)").unwrap());
}

#[test]
fn mirrored_offsets_parse_to_the_same_factor() {
    let low = parse_product("(q^2,q^19;q^21)").unwrap();
    let high = parse_product("(q^19,q^2;q^21)").unwrap();
    assert_eq!(low, high);
    assert_eq!(high.to_string(), "(q^2,q^19;q^21)");
}

#[test]
fn exponent_sum_violation_points_at_the_factor() {
    let err = parse_product("(q,q^3;q^5)").unwrap_err();
    assert_eq!(err.message, "exponents do not sum to modulus");
    assert_eq!(err.offset, 0);
    // Second factor: the offset moves to its opening parenthesis.
    let err = parse_product("(q,q^4;q^5) (q^2,q^2;q^15)").unwrap_err();
    assert_eq!(err.message, "exponents do not sum to modulus");
    assert_eq!(err.offset, 12);
    assert_eq!(
        err.to_string(),
        "parse error at byte 12: exponents do not sum to modulus"
    );
}

#[test]
fn syntax_errors_carry_byte_offsets() {
    // No comma: single Euler factors have no surface syntax.
    let err = parse_product("(q;q^1)").unwrap_err();
    assert_eq!((err.offset, err.message.as_str()), (2, "expected ','"));

    let err = parse_product("(q,q^4;q^5").unwrap_err();
    assert_eq!((err.offset, err.message.as_str()), (10, "expected ')'"));

    let err = parse_product("(q,q^4;q^5) ^2").unwrap_err();
    assert_eq!((err.offset, err.message.as_str()), (12, "expected '('"));

    let err = parse_product("(q,q^;q^5)").unwrap_err();
    assert_eq!((err.offset, err.message.as_str()), (5, "expected a number"));

    let err = parse_product("(q,q^4;q5)").unwrap_err();
    assert_eq!((err.offset, err.message.as_str()), (8, "expected '^'"));

    let err = parse_product("").unwrap_err();
    assert_eq!((err.offset, err.message.as_str()), (0, "empty product"));

    let err = parse_product("   ").unwrap_err();
    assert_eq!((err.offset, err.message.as_str()), (0, "empty product"));
}

#[test]
fn semantic_factor_errors_surface_with_core_text() {
    // Offset zero is out of range for a pair factor.
    let err = parse_product("(q^0,q^5;q^5)").unwrap_err();
    assert_eq!(err.message, "invalid Pochhammer parameters");
    assert_eq!(err.offset, 0);

    let err = parse_product("(q,q^4;q^5)^0").unwrap_err();
    assert_eq!(err.message, "power must be positive");
}
