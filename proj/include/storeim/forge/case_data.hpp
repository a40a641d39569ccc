#pragma once

// Reference case values for the Facebook and Skype Store-app caches.
// Truncated cells are completed with plausible filler; everything a test
// asserts on is verbatim.

#include <array>
#include <cstdint>
#include <string_view>

namespace storeim::case_data {

// ---- Facebook -------------------------------------------------------------

inline constexpr std::string_view kFacebookPackage = "Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt";
inline constexpr std::string_view kFacebookFamily = "Facebook.Facebook_8xx8rvfyw5nnt";
inline constexpr std::string_view kSuspectFbUid = "100004911219827";  // Kelvin Sky
inline constexpr std::string_view kVictimFbUid = "100004935817781";   // Jack Jeffrey

struct AnalyticsRow {
  std::int64_t id;
  std::uint64_t time_ms;
  std::string_view log_type, name, module, extra;
};
inline constexpr AnalyticsRow kLoginRow{1, 1421898314666ULL, "client_event", "login", "login_events", "{}"};

struct FriendRow {
  std::string_view uid, name, first, middle, last, email, phones, profile_url;
  double rank;
  std::string_view birthday;
};
inline constexpr FriendRow kKelvinFriend{"100004911219827", "Kelvin Sky", "Kelvin", "", "Sky",
                                         "fbccester@gmail.com", "[]", "https://www.facebook.com/kelvin.sky.52",
                                         0.000848054885, "1990-01-01 00:00:00"};

struct MessageRow {
  std::int64_t rowid;
  std::string_view body;
  std::string_view sender_uid, sender_name;
  std::string_view tags;  // as rendered by the app: a brace-wrapped list
  std::uint64_t timestamp_ms;
  bool has_attachments;
};
inline constexpr std::string_view kThreadId = "t_msg.e241af58a97e1061a57df95b2d0480d352";
inline constexpr std::array<MessageRow, 5> kMessageRows{{
    {15, "Here are some files for you SUSPECT", "100004911219827", "Kelvin Sky",
     R"([{"inbox", "read", "sent", "source:chat"}])", 1421644786450ULL, false},
    {16, "", "100004935817781", "Jack Jeffrey", R"([{"inbox", "read", "source:chat"}])", 1421644776796ULL, true},
    {17, "Here are some files for you", "100004935817781", "Jack Jeffrey",
     R"([{"inbox", "read", "source:chat"}])", 1421644752737ULL, false},
    {18, "Hello Victim", "100004935817781", "Jack Jeffrey", R"([{"inbox", "read", "source:chat"}])",
     1421644744425ULL, false},
    {19, "Hello Suspect", "100004911219827", "Kelvin Sky", R"([{"inbox", "read", "sent", "source:chat"}])",
     1421644736327ULL, false},
}};

inline constexpr std::string_view kAttachmentsJson = R"([[
  {
    "name": "10934517_391924760981228_2133990913_n.jpg",
    "size": 0,
    "id": "391924760981228",
    "localurl": null,
    "height": 960,
    "width": 742,
    "preview": "https://fbcdn-sphotos-h-a.akamaihd.net/hphotos-ak-xpa1/v/t34.0-12/p206x206/10934517_391924760981228_2133990913_n.jpg?oh=8d69df2a97d71f567739c0e2e20e61eb&oe=54DECA5D&__gda__=1423880331_d81326e18103fd67386d5f7f38bf83f5",
    "url": "https://fbcdn-sphotos-h-a.akamaihd.net/hphotos-ak-xpa1/v/t34.0-12/10934517_391924760981228_2133990913_n.jpg?oh=16498c19d5072ead455d682297f4e9fd&oe=54DEA7C8&__gda__=1423888552_385688eacbf4d81b12eedfbd13add909",
    "mime": "image/jpeg",
    "type": 4
  },
  {
    "name": "VictimToSuspect.pdf",
    "size": 31747,
    "id": "391924720981232",
    "localurl": null,
    "mime": "application/pdf",
    "type": 7
  }
]])";

struct UserRow {
  std::string_view id, email, name, first, last;
  int pushable;
  std::uint64_t last_active_s;
};
inline constexpr std::array<UserRow, 2> kUserRows{{
    {"100004911219827", "100004911219827@facebook.com", "Kelvin Sky", "Kelvin", "Sky", 1, 1423766054ULL},
    {"100004935817781", "100004935817781@facebook.com", "Jack Jeffry", "Jack", "Jeffry", 0, 1423766043ULL},
}};

struct NotificationRow {
  std::string_view notification_id, object_id, object_type, sender_id, title_text, href;
  int unread;
  std::string_view updated, created;
};
inline constexpr std::array<NotificationRow, 2> kNotificationRows{{
    {"19223616", "100004935817781", "friend", "100004935817781", "Jack Jeffrey accepted your friend request.",
     "http://www.facebook.com/jack.jeffrey.9", 1, "2015-02-12 17:51:12", "2015-02-12 17:48:40"},
    {"19224843", "100004911219827", "stream", "100004935817781", "Jack Jeffrey posted on your timeline.",
     "http://www.facebook.com/kelvin.sky.52/posts/1", 0, "2015-02-12 18:31:05", "2015-02-12 18:30:57"},
}};

// Memory remnant of a pushed chat message.
inline constexpr std::string_view kOrcaFragment = R"({
  "message": "Kelvin Sky: Here are some files for you SUSPECT",
  "time": 1421685383,
  "is_logged_out_push": false,
  "target_uid": 100004935817781,
  "params": {
    "action_id": "1421685383451000000",
    "uid": "100004911219827",
    "push_phase": "V3",
    "disable_light": "1",
    "PushNotifID": "77bf53eb-8fe8-4b63-b3f9-13eb240cd7b3",
    "disable_vibrate": "1",
    "disable_sound": "1",
    "tid": "439758492746659",
    "d": "b272fb5G5af436acda35G0G091da71d",
    "a": "100004911219827",
    "n": "mid.1421685383423:002f4592b91a2c3779",
    "o": "1",
    "m": "2cf9adeb98",
    "u": "100004935817781",
    "t": "2541960aad",
    "s": "1421685383437",
    "unified_tid": "msg.e241af58a97e1061a57df95b2d0480d352"
  },
  "type": "orca_message",
  "unread_count": 1
})";

// NTFS tracker export of the download sequence. Times are wall-clock text
// without a zone.
inline constexpr std::string_view kNtfsCsv =
    "LSN,Event Time,Event,Detail,File Name,Full Path(from $MFT),Create Time,Modified Time\r\n"
    "274599978,2015-01-22 11:46:02,File Creation,,VictimToSuspect.txt,Users\\anonymous\\Downloads\\VictimToSuspect.txt,2015-01-22 11:46:02,2015-01-22 11:46:02\r\n"
    "274606936,2015-01-22 11:46:05,File Creation,,VictimToSuspect[1].txt,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].txt,2015-01-22 11:46:05,2015-01-22 11:46:05\r\n"
    "274607236,,File Deletion,,VictimToSuspect[1].txt,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].txt,2015-01-22 11:46:05,2015-01-22 11:46:05\r\n"
    "274608619,2015-01-22 11:46:06,Moving After,,VictimToSuspect.txt,Users\\anonymous\\Downloads\\VictimToSuspect.txt,,\r\n"
    "274610541,,File Deletion,,VictimToSuspect.txt,Users\\anonymous\\Downloads\\VictimToSuspect.txt,2015-01-22 11:46:03,2015-01-22 11:46:05\r\n"
    "274754366,2015-01-22 11:49:27,File Creation,,VictimToSuspect.zip,Users\\anonymous\\Downloads\\VictimToSuspect.zip,2015-01-22 11:49:27,2015-01-22 11:49:27\r\n"
    "274771865,2015-01-22 11:49:29,File Creation,,VictimToSuspect[1].zip,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].zip,2015-01-22 11:49:29,2015-01-22 11:49:29\r\n"
    "274772075,,Writing Content of Non-Resident File,Cluster Number : 93740(8),VictimToSuspect[1].zip,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].zip,,\r\n"
    "274772336,,File Deletion,,VictimToSuspect[1].zip,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].zip,2015-01-22 11:49:29,2015-01-22 11:49:29\r\n"
    "274776391,2015-01-22 11:49:29,Moving After,,VictimToSuspect.zip,Users\\anonymous\\Downloads\\VictimToSuspect.zip,,\r\n"
    "274788454,,File Deletion,,VictimToSuspect.zip,Users\\anonymous\\Downloads\\VictimToSuspect.zip,2015-01-22 11:49:27,2015-01-22 11:49:29\r\n"
    "274841802,2015-01-22 11:49:37,File Creation,,VictimToSuspect.pdf,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect.pdf,2015-01-22 11:49:37,2015-01-22 11:49:37\r\n"
    "274844130,2015-01-22 11:49:39,File Creation,,VictimToSuspect[1].pdf,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].pdf,2015-01-22 11:49:39,2015-01-22 11:49:39\r\n"
    "274844390,,Writing Content of Non-Resident File,Cluster Number : 21424(8),VictimToSuspect[1].pdf,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].pdf,,\r\n"
    "274844601,,File Deletion,,VictimToSuspect[1].pdf,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].pdf,2015-01-22 11:49:39,2015-01-22 11:49:39\r\n"
    "274845976,2015-01-22 11:49:39,Moving After,,VictimToSuspect.pdf,Users\\anonymous\\Downloads\\VictimToSuspect.pdf,,\r\n"
    "274857230,2015-01-22 11:49:47,File Creation,,VictimToSuspect.link,Users\\anonymous\\AppData\\Roaming\\Microsoft\\Windows\\Recent\\VictimToSuspect.link,2015-01-22 11:49:47,2015-01-22 11:49:47\r\n"
    "274857512,,Writing Content of Non-Resident File,Cluster Number : 229569(1),VictimToSuspect.link,Users\\anonymous\\AppData\\Roaming\\Microsoft\\Windows\\Recent\\VictimToSuspect.link,,\r\n"
    "274858765,,File Deletion,,VictimToSuspect.pdf,Users\\anonymous\\Downloads\\VictimToSuspect.pdf,2015-01-22 11:49:37,2015-01-22 11:49:39\r\n"
    "274864444,,File Deletion,,VictimToSuspect.link,Users\\anonymous\\Downloads\\VictimToSuspect.link,2015-01-22 11:49:37,2015-01-22 11:49:39\r\n"
    "274865943,2015-01-22 11:49:54,File Creation,,VictimToSuspect.rtf,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect.rtf,2015-01-22 11:49:54,2015-01-22 11:49:54\r\n"
    "274865947,2015-01-22 11:49:56,File Creation,,VictimToSuspect[1].rtf,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].rtf,2015-01-22 11:49:56,2015-01-22 11:49:56\r\n"
    "274866519,,Writing Content of Non-Resident File,Cluster Number : 2493(11),VictimToSuspect[1].rtf,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].rtf,,\r\n"
    "274868803,,File Deletion,,VictimToSuspect[1].rtf,Users\\anonymous\\AppData\\Local\\Packages\\Facebook.Facebook_8x08rvfvyw5nnt\\AC\\NetCache\\VictimToSuspect[1].rtf,2015-01-22 11:49:56,2015-01-22 11:49:56\r\n"
    "274871305,2015-01-22 11:49:57,Moving After,,VictimToSuspect.rtf,Users\\anonymous\\Downloads\\VictimToSuspect.rtf,,\r\n"
    "274875542,,File Deletion,,VictimToSuspect.rtf,Users\\anonymous\\Downloads\\VictimToSuspect.rtf,2015-01-22 11:49:54,2015-01-22 11:49:57\r\n";
inline constexpr std::size_t kNtfsRowCount = 26;
inline constexpr std::size_t kNtfsBlankTimeRows = 13;

// ---- Skype ----------------------------------------------------------------

inline constexpr std::string_view kSkypePackage = "Microsoft.SkypeApp_2.0.0.5011_x86_kzf8qxf38zg5c";
inline constexpr std::string_view kSkypeFamily = "Microsoft.SkypeApp_kzf8qxf38zg5c";
inline constexpr std::string_view kSuspectSkype = "adam.thomson11";
inline constexpr std::string_view kVictimSkype = "harold.cornwall1";

// The HostCache string as shown; it is cut mid-entry, hence the odd length.
inline constexpr std::string_view kHostCache =
    "41C8010500410502006FDD4D9E9C560001040002B188F4A5050003B188F4A5050004000500410502004137DF188109D001040002B6D499A";
inline constexpr std::uint32_t kLastIpDecimal = 1940151468;
inline constexpr std::uint16_t kListeningPort = 37439;
inline constexpr std::string_view kSupernode = "111.221.77.148:40028";

inline constexpr std::uint64_t kConfigLastUsed = 1421679670;
inline constexpr std::string_view kConfigXml =
    "<?xml version=\"1.0\" ?>\r\n"
    "<config version=\"1.0\" serial=\"78\" timestamp=\"1421686251.63\">\r\n"
    "<Account>\r\n"
    "  <LastPartnerId>830</LastPartnerId>\r\n"
    "  <LastUsed>1421679670</LastUsed>\r\n"
    "  <LocalData>4215</LocalData>\r\n"
    "  <Migration>63</Migration>\r\n"
    "  <OMigration>1</OMigration>\r\n"
    "</Account>\r\n"
    "<u>\r\n"
    "  <echo123>9db4df93:2</echo123>\r\n"
    "  <harold.2Ecornwall1>4857bb98:2</harold.2Ecornwall1>\r\n"
    "</u>\r\n"
    "<UI>\r\n"
    "</UI>\r\n"
    "</config>\r\n";

struct TransferRow {
  std::int64_t id;
  std::string_view filename;
  std::uint64_t filesize;
  std::string_view tid;
};
inline constexpr std::uint64_t kTransferStart = 1421685822;
inline constexpr std::array<TransferRow, 6> kTransfers{{
    {53, "SuspectToVictim.docx", 78080, "1335338368"},
    {54, "SuspectToVictim.jpg", 287937, "358042097"},
    {55, "SuspectToVictim.pdf", 31747, "3482891630"},
    {56, "SuspectToVictim.rtf", 43360, "3018727815"},
    {57, "SuspectToVictim.txt", 2734, "1324086924"},
    {58, "SuspectToVictim.zip", 30967, "621137037"},
}};

inline constexpr std::string_view kFilesBodyXml =
    "<files alt=\"\">\n"
    "  <file size=\"78080\" index=\"0\" tid=\"1335338368\">SuspectToVictim.docx</file>\n"
    "  <file size=\"287937\" index=\"1\" tid=\"358042097\">SuspectToVictim.jpg</file>\n"
    "  <file size=\"31747\" index=\"2\" tid=\"3482891630\">SuspectToVictim.pdf</file>\n"
    "  <file size=\"43360\" index=\"3\" tid=\"3018727815\">SuspectToVictim.rtf</file>\n"
    "  <file size=\"2734\" index=\"4\" tid=\"1324086924\">SuspectToVictim.txt</file>\n"
    "  <file size=\"30967\" index=\"5\" tid=\"621137037\">SuspectToVictim.zip</file>\n"
    "</files>";

inline constexpr std::string_view kVideoSid = "90699566cef64bd97b99704588c41609";
inline constexpr std::string_view kVideoPublicLink =
    "https://vm.skype.com/mail/adam.thomson11/90699566cef64bd97b99704588c41609";
inline constexpr std::string_view kVideoBodyXml =
    "<videomessage sid=\"90699566cef64bd97b99704588c41609\" feature_name=\"\" "
    "publiclink=\"https://vm.skype.com/mail/adam.thomson11/90699566cef64bd97b99704588c41609\">You've got a video "
    "message. To see it, simply copy this secret code 1400 and <a "
    "href=\"https://vm.skype.com/mail/adam.thomson11/90699566cef64bd97b99704588c41609\">watch your video message "
    "here</a></videomessage>";
inline constexpr std::uint64_t kVideoReactionTime = 1422254107;

struct SkypeMessageRow {
  std::int64_t id;
  std::string_view chatname, author, from_dispname, dialog_partner;
  std::uint64_t timestamp;
  int type;
  int chatmsg_status;  // 0 = NULL
  std::string_view body_xml, identities, reason;
};
// Messages rows; the files row carries kFilesBodyXml.
inline constexpr std::array<SkypeMessageRow, 11> kSkypeMessages{{
    {33, "harold.cornwall1", "adam.thomson11", "Adam Thomson", "", 1421679180, 50, 2,
     "Hello Harold Cornwall, I'd like to add you as a contact.", "harold.cornwall1", ""},
    {39, "#harold.cornwall1/$adam.thomson11;2fd5ca8c5a2b8a4a", "harold.cornwall1", "Harold Cornwall",
     "harold.cornwall1", 1421679414, 61, 0, "hello SUSPECT", "", ""},
    {50, "harold.cornwall1", "adam.thomson11", "Adam Thomson", "", 1421679808, 30, 2,
     "<partlist type=\"started\" alt=\"\"><part identity=\"adam.thomson11\"></part></partlist>", "", "no_answer"},
    {51, "harold.cornwall1", "adam.thomson11", "Adam Thomson", "", 1421679808, 39, 2,
     "<partlist type=\"ended\" alt=\"\"><part identity=\"adam.thomson11\"></part></partlist>", "", "no_answer"},
    {52, "harold.cornwall1", "harold.cornwall1", "Harold Cornwall", "", 1421685790, 61, 0,
     "Waiting for the files SUSPECT", "", ""},
    {59, "#harold.cornwall1/$adam.thomson11;2fd5ca8c5a2b8a4a", "adam.thomson11", "Adam Thomson",
     "harold.cornwall1", 1421685822, 68, 2, "", "", ""},
    {63, "#harold.cornwall1/$adam.thomson11;2fd5ca8c5a2b8a4a", "harold.cornwall1", "Harold Cornwall",
     "harold.cornwall1", 1421685858, 61, 0, "Here are some files for you SUSPECT", "", ""},
    {64, "#harold.cornwall1/$adam.thomson11;2fd5ca8c5a2b8a4a", "harold.cornwall1", "Harold Cornwall",
     "harold.cornwall1", 1421685875, 68, 0,
     "<files alt=\"Posted files\"><file size=\"2734\" index=\"0\" tid=\"1324086925\">VictimToSuspect.txt</file></files>",
     "", ""},
    {75, "harold.cornwall1", "adam.thomson11", "Adam Thomson", "", 1421685910, 30, 2,
     "<partlist type=\"started\" alt=\"\"><part identity=\"adam.thomson11\"></part></partlist>", "harold.cornwall1",
     "busy"},
    {76, "harold.cornwall1", "adam.thomson11", "Adam Thomson", "", 1421685916, 39, 2,
     "<partlist type=\"ended\" alt=\"\"><part identity=\"adam.thomson11\"></part></partlist>", "", ""},
    {89, "harold.cornwall1", "adam.thomson11", "Adam Thomson", "", 1421685961, 30, 2,
     "<partlist type=\"started\" alt=\"\"><part identity=\"adam.thomson11\"></part></partlist>", "harold.cornwall1",
     "recording_failed"},
}};

struct CallRow {
  std::int64_t id;
  std::uint64_t begin;
  std::string_view host_identity;
  int duration;  // -1 = NULL
  int is_incoming;
  std::string_view name;
};
inline constexpr std::array<CallRow, 4> kCalls{{
    {100, 1421685999, "adam.thomson11", 14, 1, "8-1421685999"},
    {104, 1421686068, "adam.thomson11", -1, 0, "9-1421686068"},
    {110, 1421686088, "adam.thomson11", 11, 0, "10-1421686088"},
    {116, 1421686142, "adam.thomson11", -1, 0, "11-1421686142"},
}};

// Skype payload header remnant found in RAM.
inline constexpr std::string_view kPayloadHeader =
    "Messaging: 2.0\r\n"
    "Message-Type: Control/ClearTyping\r\n"
    "IM-Display-Name: Harold Cornwall\r\n"
    "Relationship-Type: Explicit\r\n"
    "Content-Type: Application/Message\r\n"
    "Content-Length: 0\r\n\r\n";

// ---- Registry -------------------------------------------------------------

inline constexpr std::string_view kRegistryRepositoryBase =
    "HKEY_USERS\\S-1-5-21-3623811015-3361044348-30300820-1013\\Software\\Classes\\Local "
    "Settings\\Software\\Microsoft\\Windows\\CurrentVersion\\AppModel\\Repository\\Families";
inline constexpr std::string_view kRegistryPersistedBase =
    "HKEY_USERS\\S-1-5-21-3623811015-3361044348-30300820-1013\\Software\\Classes\\Local "
    "Settings\\Software\\Microsoft\\Windows\\CurrentVersion\\AppModel\\SystemAppData\\Microsoft.SkypeApp_"
    "kzf8qxf38zg5c\\PersistedStorageItemTable\\ManagedByApp";

// ---- Network endpoints ----------------------------------------------------

inline constexpr std::string_view kFacebookChatIp = "31.13.76.102";
inline constexpr std::uint16_t kSupernodeLookupPort = 33033;

}  // namespace storeim::case_data
