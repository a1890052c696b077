import pytest

from milpforge.classes import ClassId, generate_class_instance
from milpforge.nltext import coverage_check, extract_placeholders, instantiate
from milpforge.sampler import build_symbolic, default_ranges, draw_parameters, sample_structure
from milpforge.teacher import (
    TEMPLATE_DIR,
    describe_class_instance,
    describe_linear,
    load_template_library,
    template_variants,
)


class TestTemplateLibrary:
    def test_loads_and_validates(self):
        library = load_template_library()
        assert len(library) == 6
        for (tag, variant), tmpl in library.items():
            assert tmpl.class_tag == tag and tmpl.variant == variant
            assert extract_placeholders(tmpl.body) == set(tmpl.parameters)

    def test_flow_classes_have_two_variants(self):
        library = load_template_library()
        for tag in ("transportation", "max_flow", "min_cost_flow"):
            assert len(template_variants(library, tag)) == 2

    def test_front_matter_mismatch_rejected(self, tmp_path):
        bad = tmp_path / "broken__v1.tmpl"
        bad.write_text(
            "---\nclass: broken\nvariant: v1\nparameters: a b\n---\nonly \\parameter{a}\n"
        )
        from milpforge.teacher import TemplateError, load_template

        with pytest.raises(TemplateError):
            load_template(bad)


class TestDescribeLinear:
    def test_full_coverage_over_many_structures(self):
        for seed in range(30):
            sym = build_symbolic(sample_structure(seed))
            entities = tuple(f"product {j + 1}" for j in range(sym.spec.n))
            desc = describe_linear(sym, entities, seed)
            assert coverage_check(desc, sym) == set()

    def test_tabular_variant_covers_via_table(self):
        for seed in range(20):
            sym = build_symbolic(sample_structure(seed))
            entities = tuple(f"product {j + 1}" for j in range(sym.spec.n))
            desc = describe_linear(sym, entities, seed, tabular=True)
            assert coverage_check(desc, sym) == set()
            if desc.table is not None:
                assert not (set(sym.parameters) & desc.table.parameter_set()) <= desc.referenced

    def test_coverage_implies_instantiation_succeeds(self):
        sym = build_symbolic(sample_structure(5))
        entities = tuple(f"product {j + 1}" for j in range(sym.spec.n))
        desc = describe_linear(sym, entities, 5)
        values = draw_parameters(sym, default_ranges(sym), 5)
        text = instantiate(desc, values)
        assert "\\parameter" not in text

    def test_deterministic(self):
        sym = build_symbolic(sample_structure(8))
        entities = tuple(f"product {j + 1}" for j in range(sym.spec.n))
        assert describe_linear(sym, entities, 3).text == describe_linear(sym, entities, 3).text


class TestDescribeClassInstance:
    @pytest.mark.parametrize("class_id", list(ClassId))
    def test_description_instantiates_cleanly(self, class_id):
        inst = generate_class_instance(class_id, seed=4)
        desc, values = describe_class_instance(inst, seed=4)
        assert desc.referenced <= set(values)
        text = instantiate(desc, values)
        assert "\\parameter" not in text
        if desc.table is not None:
            assert desc.table.parameter_set() <= set(values)

    def test_knapsack_mentions_labels(self):
        inst = generate_class_instance(ClassId.KNAPSACK, seed=1)
        desc, values = describe_class_instance(inst, seed=1)
        for label in inst.proxy.entity_labels[:3]:
            assert label in desc.text
