import pytest

from camsa.course import parse_layout, validate_layout, write_layout, zone_of_point
from camsa.synth import CONE3, CONE4, HOOP_X, HOOP_Y, front_layout, rear_layout


@pytest.fixture
def layouts():
    return front_layout(), rear_layout()


class TestValidateLayout:
    def test_canonical_layouts_pass(self, layouts):
        front, rear = layouts
        report = validate_layout(front, rear)
        assert report.ok, report.violations

    def test_five_hoops_flagged(self, layouts):
        front, rear = layouts
        broken = type(front)(
            view=front.view, hoops=front.hoops[:5], cones=front.cones,
            rect=front.rect, start_region=front.start_region, zones=front.zones,
        )
        report = validate_layout(broken, rear)
        assert not report.ok
        assert any("hoop count 5 != 6" in v for v in report.violations)

    def test_missing_rect_flagged(self, layouts):
        front, rear = layouts
        broken = type(rear)(
            view=rear.view, hoops=rear.hoops, cones=rear.cones,
            rect=None, start_region=rear.start_region, zones=rear.zones,
        )
        report = validate_layout(front, broken)
        assert any("rect target absent" in v for v in report.violations)

    def test_missing_zone_flagged(self, layouts):
        front, rear = layouts
        zones = dict(front.zones)
        del zones[5]
        broken = type(front)(
            view=front.view, hoops=front.hoops, cones=front.cones,
            rect=front.rect, start_region=front.start_region, zones=zones,
        )
        report = validate_layout(broken, rear)
        assert any("zone for action 5 absent" in v for v in report.violations)

    def test_missing_cone_flagged(self, layouts):
        front, rear = layouts
        broken = type(rear)(
            view=rear.view, hoops=rear.hoops, cones=rear.cones[:1],
            rect=rear.rect, start_region=rear.start_region, zones=rear.zones,
        )
        report = validate_layout(front, broken)
        assert any("cones" in v and "absent" in v for v in report.violations)

    def test_hoop_order_flagged(self, layouts):
        # hoop 2 pushed past hoop 3 so 1..3 no longer advance monotonically
        front, rear = layouts
        hoops = list(front.hoops)
        h2 = hoops[1]
        hoops[1] = type(h2)(id=2, center=(hoops[4].center[0], h2.center[1]), radius=h2.radius)
        broken = type(front)(
            view=front.view, hoops=tuple(hoops), cones=front.cones,
            rect=front.rect, start_region=front.start_region, zones=front.zones,
        )
        report = validate_layout(broken, rear)
        assert any("not monotone" in v for v in report.violations)

    def test_landmark_list_order_irrelevant(self, layouts):
        front, rear = layouts
        shuffled = type(front)(
            view=front.view, hoops=front.hoops[::-1], cones=front.cones[::-1],
            rect=front.rect, start_region=front.start_region, zones=front.zones,
        )
        assert validate_layout(shuffled, rear).violations == validate_layout(front, rear).violations


class TestZoneOfPoint:
    def test_hoop2_center_is_action1(self, layouts):
        front, _ = layouts
        assert zone_of_point(front, (HOOP_X[1], HOOP_Y)) == 1

    def test_point_outside_all_zones(self, layouts):
        front, _ = layouts
        assert zone_of_point(front, (50.0, 50.0)) is None

    def test_step_hop_corridor_is_action5(self, layouts):
        front, _ = layouts
        corridor_point = ((CONE3[0] + CONE4[0]) / 2, 850.0)
        assert zone_of_point(front, corridor_point) == 5

    def test_hoop5_is_action6(self, layouts):
        # hoops 4..6 sit outside the action-1 gate but inside the hop gate
        front, _ = layouts
        assert zone_of_point(front, (HOOP_X[4], HOOP_Y)) == 6

    def test_lowest_id_wins_on_overlap(self, layouts):
        front, _ = layouts
        # hoop 1 region is covered by both gate 1 and gate 6
        assert zone_of_point(front, (HOOP_X[0], HOOP_Y)) == 1


class TestLayoutFiles:
    def test_round_trip(self, layouts):
        for layout in layouts:
            parsed = parse_layout(write_layout(layout))
            assert parsed.view == layout.view
            assert {h.id for h in parsed.hoops} == {h.id for h in layout.hoops}
            assert parsed.zones.keys() == layout.zones.keys()
            assert write_layout(parsed) == write_layout(layout)

    def test_rect_optional(self, layouts):
        front, _ = layouts
        assert parse_layout(write_layout(front)).rect is None
