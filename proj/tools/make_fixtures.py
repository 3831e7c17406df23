#!/usr/bin/env python3
"""Regenerates the fixture app corpus under fixtures/.

The first four apps are hand-specified because tests rely on their exact
shape. The rest are generated from a fixed seed to vary the call structure.
Output is LF-only with no trailing whitespace, so parse/emit is the identity.
"""

import argparse
import itertools
import pathlib
import random
import shutil

MANIFEST = """<?xml version="1.0" encoding="utf-8"?>
<manifest xmlns:android="http://schemas.android.com/apk/res/android"
    package="{pkg}">

    <uses-sdk android:minSdkVersion="{min_sdk}" android:targetSdkVersion="{target_sdk}" />
{perms}
    <application
        android:allowBackup="false"
        android:label="{label}">
{components}
    </application>

</manifest>
"""

COMPONENT_TAG = {
    "Activity": "activity",
    "Service": "service",
    "Receiver": "receiver",
    "Provider": "provider",
}

FRAMEWORK_SUPER = {
    "Activity": "Landroid/app/Activity;",
    "Service": "Landroid/app/Service;",
    "Receiver": "Landroid/content/BroadcastReceiver;",
    "Provider": "Landroid/content/ContentProvider;",
}


def manifest(pkg, components, perms=(), min_sdk=21, target_sdk=30):
    comp_lines = []
    for kind, name in components:
        tag = COMPONENT_TAG[kind]
        if kind == "Activity":
            comp_lines.append(
                f'        <{tag} android:name="{name}">\n'
                "            <intent-filter>\n"
                '                <action android:name="android.intent.action.MAIN" />\n'
                "            </intent-filter>\n"
                f"        </{tag}>")
        elif kind == "Provider":
            comp_lines.append(
                f'        <{tag} android:name="{name}"\n'
                f'            android:authorities="{pkg}.data" />')
        else:
            comp_lines.append(f'        <{tag} android:name="{name}" />')
    perm_lines = "".join(
        f'    <uses-permission android:name="{p}" />\n' for p in perms)
    if perm_lines:
        perm_lines = "\n" + perm_lines
    return MANIFEST.format(pkg=pkg, min_sdk=min_sdk, target_sdk=target_sdk,
                           perms=perm_lines, label=pkg.split(".")[-1],
                           components="\n".join(comp_lines))


def method(header, registers, body):
    lines = [f".method {header}", f"    .registers {registers}", ""]
    for b in body:
        lines.append(f"    {b}" if b else "")
    lines.append(".end method")
    return "\n".join(lines)


def smali_class(desc, superclass, methods, access="public", source=None,
                interfaces=(), fields=(), annotations=()):
    out = [f".class {access} {desc}", f".super {superclass}"]
    if source:
        out.append(f'.source "{source}"')
    if interfaces:
        out.append("")
        out.append("# interfaces")
        out.extend(f".implements {i}" for i in interfaces)
    for block in annotations:
        out.append("")
        out.append(block)
    if fields:
        out.append("")
        out.append("")
        out.append("# instance fields")
        out.extend(fields)
    for m in methods:
        out.append("")
        out.append("")
        out.append(m)
    return "\n".join(out) + "\n"


def init(superclass, registers=1):
    return method("public constructor <init>()V", registers, [
        f"invoke-direct {{p0}}, {superclass}-><init>()V",
        "",
        "return-void",
    ])


def write_app(root, name, manifest_text, classes, extra_files=None):
    app = root / name
    for desc, text in classes.items():
        path = app / "smali" / (desc[1:-1] + ".smali")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, newline="\n")
    (app / "AndroidManifest.xml").write_text(manifest_text, newline="\n")
    for rel, data in (extra_files or {}).items():
        path = app / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)


def app01(root):
    # Reachable developer methods: onCreate, onResume, Formatter.format, greet.
    # greet is one hop from onResume and two from onCreate.
    p = "Lcom/app01/"
    main = smali_class(p + "MainActivity;", "Landroid/app/Activity;", [
        init("Landroid/app/Activity;"),
        method("protected onCreate(Landroid/os/Bundle;)V", 3, [
            '.param p1, "savedInstanceState"    # Landroid/os/Bundle;',
            "",
            ".line 14",
            "invoke-super {p0, p1}, Landroid/app/Activity;->onCreate(Landroid/os/Bundle;)V",
            "",
            'const-string v0, "app01"',
            "",
            f"invoke-static {{v0}}, {p}Formatter;->format(Ljava/lang/String;)Ljava/lang/String;",
            "",
            "move-result-object v0",
            "",
            "invoke-static {}, Landroidx/core/Compat;->check()Z",
            "",
            "return-void",
        ]),
        method("protected onResume()V", 2, [
            "invoke-super {p0}, Landroid/app/Activity;->onResume()V",
            "",
            'const-string v0, "again"',
            "",
            f"invoke-static {{v0}}, {p}Greeter;->greet(Ljava/lang/String;)V",
            "",
            "return-void",
        ]),
    ], source="MainActivity.java")
    util = smali_class(p + "Formatter;", "Ljava/lang/Object;", [
        init("Ljava/lang/Object;"),
        method("public static format(Ljava/lang/String;)Ljava/lang/String;", 3, [
            "new-instance v0, Ljava/lang/StringBuilder;",
            "",
            "invoke-direct {v0}, Ljava/lang/StringBuilder;-><init>()V",
            "",
            'const-string v1, "> "',
            "",
            "invoke-virtual {v0, v1}, Ljava/lang/StringBuilder;->append(Ljava/lang/String;)Ljava/lang/StringBuilder;",
            "",
            "invoke-virtual {v0, p0}, Ljava/lang/StringBuilder;->append(Ljava/lang/String;)Ljava/lang/StringBuilder;",
            "",
            "invoke-virtual {v0}, Ljava/lang/StringBuilder;->toString()Ljava/lang/String;",
            "",
            "move-result-object v0",
            "",
            f"invoke-static {{v0}}, {p}Greeter;->greet(Ljava/lang/String;)V",
            "",
            "return-object v0",
        ]),
    ], source="Formatter.java")
    greeter = smali_class(p + "Greeter;", "Ljava/lang/Object;", [
        method("public static greet(Ljava/lang/String;)V", 2, [
            'const-string v0, "app01"',
            "",
            "invoke-static {v0, p0}, Landroid/util/Log;->d(Ljava/lang/String;Ljava/lang/String;)I",
            "",
            "return-void",
        ]),
    ], source="Greeter.java")
    unused = smali_class(p + "Unused;", "Ljava/lang/Object;", [
        init("Ljava/lang/Object;"),
        method("public run()V", 1, [
            f'invoke-static {{}}, {p}Unused;->helper()V',
            "",
            "return-void",
        ]),
        method("private static helper()V", 0, ["return-void"]),
    ], source="Unused.java")
    compat = smali_class("Landroidx/core/Compat;", "Ljava/lang/Object;", [
        method("public static check()Z", 1, [
            "const/4 v0, 0x1",
            "",
            "return v0",
        ]),
    ], source="Compat.java")
    write_app(root, "app01", manifest("com.app01", [("Activity", ".MainActivity")],
                                      perms=["android.permission.VIBRATE"]), {
        p + "MainActivity;": main,
        p + "Formatter;": util,
        p + "Greeter;": greeter,
        p + "Unused;": unused,
        "Landroidx/core/Compat;": compat,
    })


def app02(root):
    # Virtual and interface dispatch over Shape <- {Circle, Square <- Big}.
    p = "Lcom/app02/"
    shape = smali_class(p + "Shape;", "Ljava/lang/Object;", [
        init("Ljava/lang/Object;"),
        method("public abstract area()I", 0, []).replace("    .registers 0\n\n", ""),
        method("public draw()V", 1, [
            "invoke-virtual {p0}, " + p + "Shape;->area()I",
            "",
            "return-void",
        ]),
    ], access="public abstract", source="Shape.java")
    circle = smali_class(p + "Circle;", p + "Shape;", [
        init(p + "Shape;"),
        method("public area()I", 1, ["const/4 v0, 0x3", "", "return v0"]),
    ], source="Circle.java")
    square = smali_class(p + "Square;", p + "Shape;", [
        init(p + "Shape;"),
        method("public area()I", 1, ["const/4 v0, 0x4", "", "return v0"]),
        method("public draw()V", 1, [
            "invoke-super {p0}, " + p + "Shape;->draw()V",
            "",
            "return-void",
        ]),
    ], source="Square.java")
    big = smali_class(p + "Big;", p + "Square;", [
        init(p + "Square;"),
        method("public scale()V", 0, ["return-void"]),
    ], source="Big.java")
    task = smali_class(p + "Task;", "Ljava/lang/Object;", [
        method("public abstract run()V", 0, []).replace("    .registers 0\n\n", ""),
    ], access="public interface abstract", source="Task.java")
    worker = smali_class(p + "Worker;", "Ljava/lang/Object;", [
        init("Ljava/lang/Object;"),
        method("public run()V", 1, [
            "new-instance v0, " + p + "Big;",
            "",
            "invoke-direct {v0}, " + p + "Big;-><init>()V",
            "",
            "invoke-virtual {v0}, " + p + "Big;->draw()V",
            "",
            "return-void",
        ]),
    ], source="Worker.java", interfaces=[p + "Task;"])
    main = smali_class(p + "MainActivity;", "Landroid/app/Activity;", [
        init("Landroid/app/Activity;"),
        method("protected onCreate(Landroid/os/Bundle;)V", 3, [
            "invoke-super {p0, p1}, Landroid/app/Activity;->onCreate(Landroid/os/Bundle;)V",
            "",
            "new-instance v0, " + p + "Circle;",
            "",
            "invoke-direct {v0}, " + p + "Circle;-><init>()V",
            "",
            "invoke-virtual {v0}, " + p + "Shape;->area()I",
            "",
            "move-result v1",
            "",
            "new-instance v0, " + p + "Worker;",
            "",
            "invoke-direct {v0}, " + p + "Worker;-><init>()V",
            "",
            "invoke-interface {v0}, " + p + "Task;->run()V",
            "",
            "return-void",
        ]),
    ], source="MainActivity.java")
    write_app(root, "app02", manifest("com.app02", [("Activity", ".MainActivity")]), {
        p + "Shape;": shape, p + "Circle;": circle, p + "Square;": square,
        p + "Big;": big, p + "Task;": task, p + "Worker;": worker,
        p + "MainActivity;": main,
    })


def app03(root):
    # Helper.target is one hop from the service and three from the activity.
    p = "Lcom/app03/"
    main = smali_class(p + "MainActivity;", "Landroid/app/Activity;", [
        init("Landroid/app/Activity;"),
        method("protected onCreate(Landroid/os/Bundle;)V", 2, [
            "invoke-super {p0, p1}, Landroid/app/Activity;->onCreate(Landroid/os/Bundle;)V",
            "",
            f"invoke-static {{}}, {p}Steps;->first()V",
            "",
            "return-void",
        ]),
    ], source="MainActivity.java")
    steps = smali_class(p + "Steps;", "Ljava/lang/Object;", [
        method("static first()V", 0, [f"invoke-static {{}}, {p}Steps;->second()V", "", "return-void"]),
        method("static second()V", 0, [f"invoke-static {{}}, {p}Helper;->target()V", "", "return-void"]),
    ], source="Steps.java")
    helper = smali_class(p + "Helper;", "Ljava/lang/Object;", [
        method("public static target()V", 2, [
            ":try_start_0",
            "const/4 v0, 0x0",
            "",
            "new-instance v1, Ljava/lang/Object;",
            "",
            "invoke-direct {v1}, Ljava/lang/Object;-><init>()V",
            ":try_end_0",
            ".catch Ljava/lang/Exception; {:try_start_0 .. :try_end_0} :catch_0",
            "",
            "return-void",
            "",
            ":catch_0",
            "move-exception v0",
            "",
            "return-void",
        ]),
    ], source="Helper.java")
    service = smali_class(p + "SyncService;", "Landroid/app/Service;", [
        init("Landroid/app/Service;"),
        method("public onStartCommand(Landroid/content/Intent;II)I", 5, [
            f"invoke-static {{}}, {p}Helper;->target()V",
            "",
            "const/4 v0, 0x1",
            "",
            "return v0",
        ]),
        method("public onBind(Landroid/content/Intent;)Landroid/os/IBinder;", 3, [
            "const/4 v0, 0x0",
            "",
            "return-object v0",
        ]),
    ], source="SyncService.java")
    write_app(root, "app03", manifest("com.app03", [
        ("Activity", ".MainActivity"), ("Service", ".SyncService")],
        perms=["android.permission.INTERNET"]), {
        p + "MainActivity;": main, p + "Steps;": steps,
        p + "Helper;": helper, p + "SyncService;": service,
    })


def app_noreach(root):
    # The only component is third-party code that never calls back in.
    launcher = smali_class("Lcom/thirdparty/sdk/LauncherActivity;", "Landroid/app/Activity;", [
        init("Landroid/app/Activity;"),
        method("protected onCreate(Landroid/os/Bundle;)V", 2, [
            "invoke-super {p0, p1}, Landroid/app/Activity;->onCreate(Landroid/os/Bundle;)V",
            "",
            "return-void",
        ]),
    ], source="LauncherActivity.java")
    orphan = smali_class("Lcom/noreach/Orphan;", "Ljava/lang/Object;", [
        init("Ljava/lang/Object;"),
        method("public static work()V", 0, ["return-void"]),
    ], source="Orphan.java")
    write_app(root, "app-noreach", manifest(
        "com.noreach", [("Activity", "com.thirdparty.sdk.LauncherActivity")]), {
        "Lcom/thirdparty/sdk/LauncherActivity;": launcher,
        "Lcom/noreach/Orphan;": orphan,
    })


LIFECYCLE = {
    "Activity": [("protected onCreate(Landroid/os/Bundle;)V", 3),
                 ("protected onStart()V", 2),
                 ("protected onResume()V", 2),
                 ("protected onPause()V", 2),
                 ("protected onDestroy()V", 2)],
    "Service": [("public onCreate()V", 2),
                ("public onStartCommand(Landroid/content/Intent;II)I", 5),
                ("public onDestroy()V", 2)],
    "Receiver": [("public onReceive(Landroid/content/Context;Landroid/content/Intent;)V", 4)],
    "Provider": [("public onCreate()Z", 2)],
}


_LABELS = itertools.count()


def filler(rng, regs):
    # Straight-line or locally branching code with no API calls of interest.
    choice = rng.randrange(5)
    v = f"v{rng.randrange(max(regs, 1))}"
    if choice == 0:
        return [f"const/4 {v}, 0x{rng.randrange(8):x}"]
    if choice == 1:
        return [f"const/16 {v}, 0x{rng.randrange(16, 200):x}", "", f"add-int/lit8 {v}, {v}, 0x1"]
    if choice == 2:
        n = next(_LABELS)
        return [f"const/4 {v}, 0x0", "", f"if-nez {v}, :cond_{n}", "",
                f"const/4 {v}, 0x1", "", f":cond_{n}"]
    if choice == 3:
        return [f'const-string {v}, "msg{rng.randrange(1000)}"']
    return [f".line {rng.randrange(10, 300)}"]


def generated_app(root, index, rng):
    name = f"app{index:02d}"
    pkg = f"com.example.{name}"
    p = "L" + pkg.replace(".", "/") + "/"
    kinds = ["Activity"]
    if index == 9:
        kinds = ["Receiver"]
    elif index == 13:
        kinds = ["Activity", "Provider"]
    elif index % 5 == 1:
        kinds = ["Service"]
    elif index % 7 == 2:
        kinds = ["Activity", "Service"]
    classes = {}
    helpers = [f"{p}Helper{k};" for k in range(rng.randrange(2, 4))]
    helper_methods = []
    for h in helpers:
        for m in range(rng.randrange(2, 4)):
            helper_methods.append((h, f"step{m}"))

    def calls(count, exclude=None):
        picked = rng.sample(helper_methods, min(count, len(helper_methods)))
        out = []
        for h, m in picked:
            if (h, m) == exclude:
                continue
            out += [f"invoke-static {{}}, {h}->{m}()V", ""]
        return out

    components = []
    use_base = index % 4 == 0
    for kind in kinds:
        cls = f"{p}Main{kind};"
        super_desc = FRAMEWORK_SUPER[kind]
        if use_base and kind == "Activity":
            base = f"{p}BaseActivity;"
            classes[base] = smali_class(base, super_desc, [
                init(super_desc),
                method("protected onStart()V", 1, [
                    f"invoke-super {{p0}}, {super_desc}->onStart()V",
                    "",
                    *calls(1),
                    "return-void",
                ]),
            ], access="public abstract", source="BaseActivity.java")
            super_desc = base
        lifecycle = rng.sample(LIFECYCLE[kind], rng.randrange(1, len(LIFECYCLE[kind]) + 1))
        lifecycle.sort()
        methods = [init(super_desc)]
        for header, regs in lifecycle:
            body = []
            if header.startswith("protected"):
                body += [f"invoke-super {{p0{', p1' if 'Bundle' in header else ''}}}, "
                         f"{super_desc}->{header.split(' ', 1)[1]}", ""]
            for _ in range(rng.randrange(0, 3)):
                body += filler(rng, regs - 1) + [""]
            body += calls(rng.randrange(1, 3))
            ret = header.rsplit(")", 1)[1]
            if ret == "V":
                body.append("return-void")
            else:
                body += ["const/4 v0, 0x1", "", "return v0"]
            methods.append(method(header, regs, body))
        if kind == "Activity" and index % 3 == 0:
            methods.append(method("private static synthetic access$000(I)I", 2, [
                "packed-switch p0, :pswitch_data_0",
                "",
                "const/4 v0, 0x0",
                "",
                "return v0",
                "",
                ":pswitch_0",
                "const/4 v0, 0x1",
                "",
                "return v0",
                "",
                ":pswitch_data_0",
                ".packed-switch 0x0",
                "    :pswitch_0",
                ".end packed-switch",
            ]))
        annotations = []
        if index % 2 == 0:
            annotations.append("\n".join([
                ".annotation system Ldalvik/annotation/MemberClasses;",
                "    value = {",
                f"        {p}Main{kind}$Inner;",
                "    }",
                ".end annotation",
            ]))
        classes[cls] = smali_class(cls, super_desc, methods,
                                   source=f"Main{kind}.java",
                                   annotations=annotations)
        components.append((kind, f".Main{kind}" if rng.random() < 0.7 else f"{pkg}.Main{kind}"))

    # Helpers call forward along the list, with an occasional back edge.
    iface = f"{p}Callback;"
    impl = f"{p}CallbackImpl;"
    use_iface = index % 3 != 1
    for h in helpers:
        ms = []
        for (owner, m) in helper_methods:
            if owner != h:
                continue
            body = []
            for _ in range(rng.randrange(0, 3)):
                body += filler(rng, 2) + [""]
            pos = helper_methods.index((owner, m))
            later = helper_methods[pos + 1:]
            if later and rng.random() < 0.6:
                t_owner, t_m = rng.choice(later)
                body += [f"invoke-static {{}}, {t_owner}->{t_m}()V", ""]
            if pos > 0 and rng.random() < 0.15:
                t_owner, t_m = helper_methods[rng.randrange(pos)]
                body += [f"invoke-static {{}}, {t_owner}->{t_m}()V", ""]
            if use_iface and rng.random() < 0.3:
                body += [f"new-instance v0, {impl}", "",
                         f"invoke-direct {{v0}}, {impl}-><init>()V", "",
                         f"invoke-interface {{v0}}, {iface}->onEvent()V", ""]
            body.append("return-void")
            ms.append(method(f"public static {m}()V", 3, body))
        classes[h] = smali_class(h, "Ljava/lang/Object;", ms,
                                 source=h.rsplit("/", 1)[1][:-1] + ".java")
    if use_iface:
        classes[iface] = smali_class(iface, "Ljava/lang/Object;", [
            method("public abstract onEvent()V", 0, []).replace("    .registers 0\n\n", ""),
        ], access="public interface abstract", source="Callback.java")
        classes[impl] = smali_class(impl, "Ljava/lang/Object;", [
            init("Ljava/lang/Object;"),
            method("public onEvent()V", 4, [
                "const/4 v0, 0x2",
                "",
                "new-array v1, v0, [I",
                "",
                "invoke-static/range {v0 .. v1}, " + p + "CallbackImpl;->sum(I[I)I",
                "",
                "return-void",
            ]),
            method("static sum(I[I)I", 2, ["return p0"]),
        ], source="CallbackImpl.java", interfaces=[iface],
            fields=[".field private count:I"])
    dead = f"{p}Dead;"
    classes[dead] = smali_class(dead, "Ljava/lang/Object;", [
        method("public static never()V", 0, [
            f"invoke-static {{}}, {helpers[0]}->step0()V", "", "return-void"]),
    ], source="Dead.java")

    min_sdk, target_sdk = (16, 16) if index == 7 else (19 + index % 5, 28 + index % 4)
    perms = ["android.permission.INTERNET"] if index % 3 == 0 else []
    if index == 10:
        perms.append("android.permission.ACCESS_FINE_LOCATION")
    extra = {}
    if index == 8:
        extra["lib/armeabi-v7a/libexisting.so"] = b"\x7fELF-placeholder\n"
        extra["assets/config.txt"] = b"mode=demo\n"
    write_app(root, name, manifest(pkg, components, perms, min_sdk, target_sdk),
              classes, extra)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "fixtures"))
    parser.add_argument("--seed", type=int, default=2026)
    args = parser.parse_args()
    root = pathlib.Path(args.out)
    if root.exists():
        shutil.rmtree(root)
    root.mkdir(parents=True)
    app01(root)
    app02(root)
    app03(root)
    app_noreach(root)
    rng = random.Random(args.seed)
    for index in range(4, 21):
        generated_app(root, index, rng)


if __name__ == "__main__":
    main()
