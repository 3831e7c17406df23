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

#include "triggerforge/payload.hpp"

namespace triggerforge {
namespace {

constexpr TriggerInfo kTriggers[] = {
    {TriggerType::kTime, "time", "at a specific time or date"},
    {TriggerType::kLocation, "location", "at a specific location"},
    {TriggerType::kSms, "sms", "if a specific sms is received"},
    {TriggerType::kNetwork, "network",
     "if Wi-Fi available or specific http response received"},
    {TriggerType::kBuild, "build",
     "if specific Build.MODEL/PRODUCT/FINGERPRINT are set"},
    {TriggerType::kCamera, "camera", "if the device possesses cameras"},
    {TriggerType::kAddition, "addition", "a dummy test with a simple addition"},
    {TriggerType::kMusic, "music", "if some music is active"},
    {TriggerType::kIsScreenOn, "is_screen_on", "if device in interactive state"},
    {TriggerType::kIsScreenOff, "is_screen_off",
     "if device not in interactive state"},
};

constexpr GuardedInfo kGuarded[] = {
    {GuardedCodeType::kReturn, "return", "no behavior", false},
    {GuardedCodeType::kSmsImei, "sms_imei",
     "send the device imei number by sms", true},
    {GuardedCodeType::kStopWifi, "stop_wifi",
     "deactivate the device Wi-Fi connection", true},
    {GuardedCodeType::kWriteString, "write_string",
     "write a constant to a file in the device's memory", false},
    {GuardedCodeType::kWritePhoneNumber, "write_phone_number",
     "write the phone number to a file in the device's memory", true},
    {GuardedCodeType::kSetText, "set_text",
     "set a constant to be dispayed on the screen", false},
    {GuardedCodeType::kSmsString, "sms_string", "send a constant by sms",
     false},
    {GuardedCodeType::kHttpLocation, "http_location",
     "sends the current location to remote server using http", true},
    {GuardedCodeType::kSetTextReflection, "set_text_reflection",
     "set a constant to be dispayed on the screen using reflection", false},
    {GuardedCodeType::kExit, "exit", "exits the app", true},
    {GuardedCodeType::kNativeLogString, "native_log_string",
     "log a constant using native code", false},
    {GuardedCodeType::kNativeLogModel, "native_log_model",
     "log the Build.MODEL information using native code", true},
    {GuardedCodeType::kNativeWritePhoneNumber, "native_write_phone_number",
     "writes the phone number to a file using native code", true},
    {GuardedCodeType::kNativePhoneNumberNetwork, "native_phone_number_network",
     "sends the phone number to a remote server using native code", true},
};

constexpr std::string_view kAccessCoarseLocation =
    "android.permission.ACCESS_COARSE_LOCATION";
constexpr std::string_view kAccessFineLocation =
    "android.permission.ACCESS_FINE_LOCATION";
constexpr std::string_view kInternet = "android.permission.INTERNET";
constexpr std::string_view kSendSms = "android.permission.SEND_SMS";
constexpr std::string_view kReadSms = "android.permission.READ_SMS";
constexpr std::string_view kReadPhoneState =
    "android.permission.READ_PHONE_STATE";
constexpr std::string_view kAccessWifiState =
    "android.permission.ACCESS_WIFI_STATE";
constexpr std::string_view kChangeWifiState =
    "android.permission.CHANGE_WIFI_STATE";
constexpr std::string_view kWriteExternalStorage =
    "android.permission.WRITE_EXTERNAL_STORAGE";

std::vector<std::string> Strings(
    std::initializer_list<std::string_view> values) {
  return {values.begin(), values.end()};
}

}  // namespace

std::span<const TriggerInfo, 10> AllTriggers() { return kTriggers; }
std::span<const GuardedInfo, 14> AllGuarded() { return kGuarded; }

std::string_view TriggerName(TriggerType t) {
  return kTriggers[static_cast<int>(t)].name;
}

std::string_view GuardedName(GuardedCodeType g) {
  return kGuarded[static_cast<int>(g)].name;
}

std::optional<TriggerType> TriggerFromName(std::string_view name) {
  for (const auto& info : kTriggers) {
    if (info.name == name) return info.type;
  }
  return std::nullopt;
}

std::optional<GuardedCodeType> GuardedFromName(std::string_view name) {
  for (const auto& info : kGuarded) {
    if (info.name == name) return info.type;
  }
  return std::nullopt;
}

bool IsMalicious(GuardedCodeType g) {
  return kGuarded[static_cast<int>(g)].malicious;
}

bool IsNative(GuardedCodeType g) { return GuardedName(g).starts_with("native_"); }

std::vector<std::string> RequiredPermissions(GuardedCodeType g) {
  switch (g) {
    case GuardedCodeType::kSmsImei:
      return Strings({kSendSms, kReadPhoneState});
    case GuardedCodeType::kStopWifi:
      return Strings({kAccessWifiState, kChangeWifiState});
    case GuardedCodeType::kWriteString:
      return Strings({kWriteExternalStorage});
    case GuardedCodeType::kWritePhoneNumber:
    case GuardedCodeType::kNativeWritePhoneNumber:
      return Strings({kReadPhoneState, kWriteExternalStorage});
    case GuardedCodeType::kSmsString:
      return Strings({kSendSms});
    case GuardedCodeType::kHttpLocation:
      return Strings({kAccessCoarseLocation, kAccessFineLocation, kInternet});
    case GuardedCodeType::kNativePhoneNumberNetwork:
      return Strings({kReadPhoneState, kInternet});
    case GuardedCodeType::kReturn:
    case GuardedCodeType::kSetText:
    case GuardedCodeType::kSetTextReflection:
    case GuardedCodeType::kExit:
    case GuardedCodeType::kNativeLogString:
    case GuardedCodeType::kNativeLogModel:
      return {};
  }
  return {};
}

std::vector<std::string> TriggerPermissions(TriggerType t) {
  switch (t) {
    case TriggerType::kSms: return Strings({kReadSms});
    case TriggerType::kLocation: return Strings({kAccessFineLocation});
    case TriggerType::kNetwork: return Strings({kAccessWifiState});
    default: return {};
  }
}

std::vector<std::string> PayloadPermissions(TriggerType t, GuardedCodeType g) {
  std::vector<std::string> out = RequiredPermissions(g);
  for (auto& p : TriggerPermissions(t)) {
    if (std::find(out.begin(), out.end(), p) == out.end()) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::span<const ApiAnchor> ApiAnchors() {
  // min_api values are the API level that introduced each call.
  static const std::vector<ApiAnchor> kAnchors = {
      // Trigger conditions.
      {"Ljava/util/Calendar;->getTimeInMillis()J", true, false, {}, 1},
      {"Landroid/location/LocationManager;->getLastKnownLocation(", true, true,
       {kAccessFineLocation}, 1},
      {"\"content://sms/inbox\"", true, false, {kReadSms}, 1},
      {"Landroid/net/wifi/WifiManager;->isWifiEnabled()Z", true, false,
       {kAccessWifiState}, 1},
      {"Landroid/os/Build;->MODEL:", true, false, {}, 1},
      {"Landroid/os/Build;->PRODUCT:", true, false, {}, 1},
      {"Landroid/os/Build;->FINGERPRINT:", true, false, {}, 1},
      {"Landroid/hardware/Camera;->getNumberOfCameras()I", true, false, {}, 9},
      {"Landroid/media/AudioManager;->isMusicActive()Z", true, false, {}, 1},
      {"Landroid/os/PowerManager;->isInteractive()Z", true, false, {}, 20},
      // Guarded code.
      {"Landroid/telephony/TelephonyManager;->getDeviceId()", false, true,
       {kReadPhoneState}, 1},
      {"Landroid/telephony/TelephonyManager;->getLine1Number()", false, true,
       {kReadPhoneState}, 1},
      {"Landroid/telephony/TelephonyManager;->getCellLocation()", false, true,
       {kAccessCoarseLocation}, 1},
      {"Landroid/telephony/SmsManager;->sendTextMessage(", false, true,
       {kSendSms}, 4},
      {"Landroid/net/wifi/WifiManager;->setWifiEnabled(Z)Z", false, true,
       {kAccessWifiState, kChangeWifiState}, 1},
      {"Landroid/os/Environment;->getExternalStorageDirectory()", false, true,
       {kWriteExternalStorage}, 1},
      {"Ljava/io/FileOutputStream;->write(", false, true, {}, 1},
      {"Landroid/widget/TextView;->setText(", false, true, {}, 1},
      {"Ljava/lang/reflect/Method;->invoke(", false, true, {}, 1},
      {"Ljava/net/URL;->openConnection()", false, true, {kInternet}, 1},
      {"Ljava/lang/System;->exit(I)V", false, true, {}, 1},
      {"Ljava/lang/System;->loadLibrary(", false, true, {}, 1},
      {";->nativeLogString(", false, true, {}, 1},
      {";->nativeLogModel(", false, true, {}, 1},
      {";->nativeWritePhoneNumber(", false, true, {kWriteExternalStorage}, 1},
      {";->nativeSendPhoneNumber(", false, true, {kInternet}, 1},
  };
  return kAnchors;
}

std::set<std::string> PermissionsImpliedBy(std::span<const Instruction> code) {
  std::set<std::string> out;
  for (const auto& ins : code) {
    for (const auto& anchor : ApiAnchors()) {
      if (ins.text.find(anchor.pattern) == std::string::npos) continue;
      for (auto p : anchor.permissions) out.emplace(p);
    }
  }
  return out;
}

}  // namespace triggerforge
