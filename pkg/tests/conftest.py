# criterion number -> (label, outcome), filled from test reports
ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            item.user_properties.append(("criterion", mark.args))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    number, label = props["criterion"]
    if report.when == "call" or report.outcome != "passed":
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        # a criterion spread over several tests fails if any of them fails
        if ACCEPTANCE.get(number, (label, "PASS"))[1] != "FAIL":
            ACCEPTANCE[number] = (label, outcome)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        label, outcome = ACCEPTANCE[number]
        terminalreporter.write_line(f"{outcome} criterion {number}: {label}")
